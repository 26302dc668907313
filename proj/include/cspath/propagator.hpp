#pragma once

#include <string>
#include <vector>

#include "cspath/fock.hpp"
#include "cspath/poly_symbol.hpp"
#include "cspath/quadrature.hpp"
#include "cspath/symbols.hpp"

namespace cspath {

/// e^{-iHt} from the eigendecomposition of the Hermitian matrix H.  Throws
/// std::invalid_argument when max|H - H^dagger| exceeds hermitian_tol.
FockOperator exact_propagator(const FockOperator& h, double t, double hermitian_tol = 1e-10);

/// (1 + iHt/N)^{-N} by N LU solves.  Throws NumericError if 1 + iHt/N is singular.
FockOperator resolvent_power(const FockOperator& h, double t, int n);

/// Toeplitz operator with Berezin symbol 1 / (1 + i p_b(psi) t / N).  p_b must be
/// real-valued (std::invalid_argument otherwise).
ToeplitzResult qn_operator(const PolySymbol& p_berezin, double t, int n, const ModeSpace& space,
                           const PhaseSpaceQuadrature& quad, ToeplitzOptions options = {});

/// ||(1 + iPt/N) Q_N - 1|| in the spectral norm, P = wick_quantize(p_wick).
double step_defect(const PolySymbol& p_wick, double t, int n, const ModeSpace& space,
                   const PhaseSpaceQuadrature& quad);

struct SliceConfig {
  double t = 0.0;
  int n = 1;
  PhasePoint psi_in;   // psi'
  PhasePoint psi_out;  // psi''
};

struct SliceElement {
  Complex value;
  /// Largest entry change of Q_N under the refined rule (0 at t = 0).
  double quadrature_error = 0.0;
  /// Non-fatal diagnostics, e.g. a non-elliptic principal symbol.
  std::string advisory;
};

/// <e^{psi''} | Q_N^N | e^{psi'}>, Q_N from the Berezin symbol of the real Wick
/// symbol p.  `refined` is passed on to the Toeplitz refinement check.
SliceElement theorem1_element(const PolySymbol& p_wick, const SliceConfig& config,
                              const ModeSpace& space, const PhaseSpaceQuadrature& quad,
                              const PhaseSpaceQuadrature* refined = nullptr);

/// <e^{psi''} | (e^{-i H0 t/N} Q_N)^N | e^{psi'}> with H0 from the space's
/// frequencies applied as exact diagonal phases.
SliceElement theorem2_element(const PolySymbol& p_wick, const SliceConfig& config,
                              const ModeSpace& space, const PhaseSpaceQuadrature& quad,
                              const PhaseSpaceQuadrature* refined = nullptr);

/// Test-only oracle substitution: Q_N replaced by the exact e^{-iPt/N}, so the
/// element is that of the plain Trotter product (e^{-iH0 t/N} e^{-iPt/N})^N.
Complex trotter_exact_factor_element(const PolySymbol& p_wick, const SliceConfig& config,
                                     const ModeSpace& space);

struct DirectCheck {
  Complex direct;
  Complex matrix_route;
  double relative_error = 0.0;
};

/// Evaluates the chained phase-space integral
///   int prod_{j=1}^N D[psi_j] f(psi_j) exp(<psi_{j+1}|psi_j> - |psi_j|^2) e^{<psi_1|psi'>},
/// psi_{N+1} = psi'', f = 1 / (1 + i p_b t/N), node by node on `quad`, and the
/// matrix-power route on the same rule.  Single mode and N <= 3 only.
DirectCheck direct_contraction_check(const PolySymbol& p_wick, const SliceConfig& config,
                                     const ModeSpace& space, const PhaseSpaceQuadrature& quad);

enum class Construction { theorem1, theorem2, resolvent };

std::string to_string(Construction c);
/// Throws std::invalid_argument on an unknown name.
Construction construction_from_string(const std::string& name);

struct ConvergenceRow {
  int n = 0;
  Complex element;
  double abs_error = 0.0;
  double runtime_ms = 0.0;
  double quadrature_error = 0.0;
};

struct ConvergenceReport {
  Construction construction = Construction::theorem1;
  std::vector<ConvergenceRow> rows;
  Complex oracle;
  /// "closed-form free kernel" or "eigendecomposition"
  std::string oracle_kind;
  /// Least-squares slope of -log(abs_error) against log N.
  double fitted_order = 0.0;
  bool fit_skipped = false;
  std::string advisory;
};

/// Runs the construction for every N in n_list (>= 4 entries, strictly
/// increasing) and compares with the exact coherent element.  Theorem 1 and
/// the resolvent route evolve with wick_quantize(p); Theorem 2 with
/// H0 + wick_quantize(p).
ConvergenceReport convergence_study(const PolySymbol& p_wick, Construction construction, double t,
                                    const std::vector<int>& n_list, const PhasePoint& psi_in,
                                    const PhasePoint& psi_out, const ModeSpace& space,
                                    const PhaseSpaceQuadrature& quad);

/// Slope of -log(err) against log(n); the caller guarantees positive errors.
double fit_order(const std::vector<int>& n, const std::vector<double>& err);

}  // namespace cspath
