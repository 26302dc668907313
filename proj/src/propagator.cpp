#include "cspath/propagator.hpp"

#include <chrono>
#include <memory>
#include <optional>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "cspath/ellipticity.hpp"
#include "cspath/kernels.hpp"

namespace cspath {

FockOperator exact_propagator(const FockOperator& h, double t, double hermitian_tol) {
  const double asym = max_abs_entry(h.matrix - h.matrix.adjoint());
  if (!(asym <= hermitian_tol)) {
    std::ostringstream msg;
    msg << "exact_propagator: operator is not Hermitian (max |H - H^dagger| = " << asym << ")";
    throw std::invalid_argument(msg.str());
  }
  const CMatrix sym = 0.5 * (h.matrix + h.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(sym);
  if (eig.info() != Eigen::Success) throw NumericError("exact_propagator: eigensolver failed");
  const Eigen::VectorXcd phases =
      (eig.eigenvalues().cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
  return {h.space, eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint()};
}

FockOperator resolvent_power(const FockOperator& h, double t, int n) {
  if (n < 1) throw std::invalid_argument("resolvent_power: N must be >= 1");
  const auto dim = h.matrix.rows();
  const CMatrix step = CMatrix::Identity(dim, dim) + Complex(0.0, t / n) * h.matrix;
  Eigen::FullPivLU<CMatrix> lu(step);
  if (!lu.isInvertible()) throw NumericError("resolvent_power: 1 + iHt/N is singular");
  CMatrix out = CMatrix::Identity(dim, dim);
  for (int i = 0; i < n; ++i) out = lu.solve(out);
  return {h.space, std::move(out)};
}

namespace {

void require_real(const PolySymbol& p, const char* who) {
  if (!p.is_real(1e-12)) throw std::invalid_argument(std::string(who) + ": symbol must be real-valued");
}

void require_boundary(const SliceConfig& c, const ModeSpace& space, const char* who) {
  const auto m = static_cast<std::size_t>(space.num_modes());
  if (c.psi_in.size() != m || c.psi_out.size() != m) {
    throw std::invalid_argument(std::string(who) + ": boundary points must have one entry per mode");
  }
  if (c.n < 1) throw std::invalid_argument(std::string(who) + ": N must be >= 1");
}

std::string ellipticity_advisory(const PolySymbol& p, const ModeSpace& space) {
  const EllipticityEstimate e = ellipticity_estimate(p, space.scale_weights(), 0.0, 64);
  if (e.is_elliptic) return {};
  std::ostringstream msg;
  msg << "principal symbol not elliptic (sampled minimum " << e.c_est << ")";
  return msg.str();
}

// e^{-i H0 tau} as a diagonal
Eigen::VectorXcd free_phases(const ModeSpace& space, double tau) {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(space.dim()));
  for (std::size_t i = 0; i < space.dim(); ++i) {
    double e = 0.0;
    for (int k = 0; k < space.num_modes(); ++k) e += space.frequencies()[k] * space.state(i)[k];
    d(static_cast<Eigen::Index>(i)) = std::polar(1.0, -e * tau);
  }
  return d;
}

}  // namespace

ToeplitzResult qn_operator(const PolySymbol& p_berezin, double t, int n, const ModeSpace& space,
                           const PhaseSpaceQuadrature& quad, ToeplitzOptions options) {
  require_real(p_berezin, "qn_operator");
  if (n < 1) throw std::invalid_argument("qn_operator: N must be >= 1");
  auto shared = std::make_shared<const PolySymbol>(p_berezin);
  const double tau = t / n;
  SymbolFn f = [shared, tau](std::span<const Complex> psi) {
    return 1.0 / Complex(1.0, (*shared)(psi).real() * tau);
  };
  return toeplitz_quantize_fn(f, space, quad, options);
}

double step_defect(const PolySymbol& p_wick, double t, int n, const ModeSpace& space,
                   const PhaseSpaceQuadrature& quad) {
  const FockOperator q = qn_operator(berezin_from_wick(p_wick), t, n, space, quad, {.refine = false}).op;
  const CMatrix p = wick_quantize(p_wick, space).matrix;
  const auto dim = p.rows();
  const CMatrix one = CMatrix::Identity(dim, dim);
  return spectral_norm((one + Complex(0.0, t / n) * p) * q.matrix - one);
}

SliceElement theorem1_element(const PolySymbol& p_wick, const SliceConfig& config,
                              const ModeSpace& space, const PhaseSpaceQuadrature& quad,
                              const PhaseSpaceQuadrature* refined) {
  require_real(p_wick, "theorem1_element");
  require_boundary(config, space, "theorem1_element");
  SliceElement out;
  out.advisory = ellipticity_advisory(p_wick, space);
  if (config.t == 0.0) {
    out.value = coherent_overlap(config.psi_out, config.psi_in);
    return out;
  }
  const ToeplitzResult q = qn_operator(berezin_from_wick(p_wick), config.t, config.n, space, quad,
                                       {.refined = refined});
  out.quadrature_error = q.refinement_error;
  CVector v = coherent_vector(space, config.psi_in).amplitudes;
  for (int i = 0; i < config.n; ++i) v = q.op.matrix * v;
  out.value = coherent_vector(space, config.psi_out).amplitudes.dot(v);
  return out;
}

SliceElement theorem2_element(const PolySymbol& p_wick, const SliceConfig& config,
                              const ModeSpace& space, const PhaseSpaceQuadrature& quad,
                              const PhaseSpaceQuadrature* refined) {
  require_real(p_wick, "theorem2_element");
  require_boundary(config, space, "theorem2_element");
  SliceElement out;
  if (config.t == 0.0) {
    out.value = coherent_overlap(config.psi_out, config.psi_in);
    return out;
  }
  const ToeplitzResult q = qn_operator(berezin_from_wick(p_wick), config.t, config.n, space, quad,
                                       {.refined = refined});
  out.quadrature_error = q.refinement_error;
  const Eigen::VectorXcd phases = free_phases(space, config.t / config.n);
  CVector v = coherent_vector(space, config.psi_in).amplitudes;
  for (int i = 0; i < config.n; ++i) v = phases.asDiagonal() * (q.op.matrix * v);
  out.value = coherent_vector(space, config.psi_out).amplitudes.dot(v);
  return out;
}

Complex trotter_exact_factor_element(const PolySymbol& p_wick, const SliceConfig& config,
                                     const ModeSpace& space) {
  require_real(p_wick, "trotter_exact_factor_element");
  require_boundary(config, space, "trotter_exact_factor_element");
  const double tau = config.t / config.n;
  const CMatrix step = exact_propagator(wick_quantize(p_wick, space), tau).matrix;
  const Eigen::VectorXcd phases = free_phases(space, tau);
  CVector v = coherent_vector(space, config.psi_in).amplitudes;
  for (int i = 0; i < config.n; ++i) v = phases.asDiagonal() * (step * v);
  return coherent_vector(space, config.psi_out).amplitudes.dot(v);
}

DirectCheck direct_contraction_check(const PolySymbol& p_wick, const SliceConfig& config,
                                     const ModeSpace& space, const PhaseSpaceQuadrature& quad) {
  require_real(p_wick, "direct_contraction_check");
  require_boundary(config, space, "direct_contraction_check");
  if (space.num_modes() != 1 || quad.num_modes() != 1) {
    throw std::invalid_argument("direct_contraction_check: single-mode spaces only");
  }
  if (config.n > 3) throw std::invalid_argument("direct_contraction_check: N must be <= 3");

  const PolySymbol pb = berezin_from_wick(p_wick);
  const double tau = config.t / config.n;
  const std::size_t nodes = quad.size();
  std::vector<Complex> factor(nodes), g(nodes), next(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    factor[i] = 1.0 / Complex(1.0, pb(quad.node(i)).real() * tau);
    const Complex x = quad.node(i)[0];
    g[i] = factor[i] * std::exp(std::conj(x) * config.psi_in[0]);
  }
  for (int j = 1; j < config.n; ++j) {
    kernels::chain_step(quad, factor, g, next);
    std::swap(g, next);
  }
  for (std::size_t i = 0; i < nodes; ++i) {
    g[i] *= std::exp(std::conj(config.psi_out[0]) * quad.node(i)[0]);
  }
  const Complex direct = kernels::weighted_sum(g, quad.weights());

  const FockOperator q = qn_operator(pb, config.t, config.n, space, quad, {.refine = false}).op;
  CVector v = coherent_vector(space, config.psi_in).amplitudes;
  for (int i = 0; i < config.n; ++i) v = q.matrix * v;
  const Complex matrix_route = coherent_vector(space, config.psi_out).amplitudes.dot(v);

  for (const Complex& z : {direct, matrix_route}) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw QuadratureError("direct_contraction_check: chained integral is not finite");
    }
  }
  return {direct, matrix_route, std::abs(direct - matrix_route) / std::abs(matrix_route)};
}

std::string to_string(Construction c) {
  switch (c) {
    case Construction::theorem1: return "theorem1";
    case Construction::theorem2: return "theorem2";
    case Construction::resolvent: return "resolvent";
  }
  return "?";
}

Construction construction_from_string(const std::string& name) {
  if (name == "theorem1") return Construction::theorem1;
  if (name == "theorem2") return Construction::theorem2;
  if (name == "resolvent") return Construction::resolvent;
  throw std::invalid_argument("unknown construction '" + name + "' (theorem1, theorem2, resolvent)");
}

double fit_order(const std::vector<int>& n, const std::vector<double>& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double x = std::log(static_cast<double>(n[i]));
    const double y = -std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

ConvergenceReport convergence_study(const PolySymbol& p_wick, Construction construction, double t,
                                    const std::vector<int>& n_list, const PhasePoint& psi_in,
                                    const PhasePoint& psi_out, const ModeSpace& space,
                                    const PhaseSpaceQuadrature& quad) {
  if (n_list.size() < 4) throw std::invalid_argument("convergence_study: need at least 4 values of N");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1 || (i > 0 && n_list[i] <= n_list[i - 1])) {
      throw std::invalid_argument("convergence_study: N list must be positive and strictly increasing");
    }
  }
  require_real(p_wick, "convergence_study");

  ConvergenceReport report;
  report.construction = construction;
  const FockOperator p_op = wick_quantize(p_wick, space);
  const bool free_field = construction == Construction::theorem2 && p_wick.pruned(0.0).is_zero();
  if (free_field) {
    PhasePoint evolved(psi_in.size());
    for (std::size_t k = 0; k < psi_in.size(); ++k) {
      evolved[k] = std::polar(1.0, -space.frequencies()[k] * t) * psi_in[k];
    }
    report.oracle = coherent_overlap(psi_out, evolved);
    report.oracle_kind = "closed-form free kernel";
  } else {
    const FockOperator h =
        construction == Construction::theorem2 ? free_hamiltonian(space) + p_op : p_op;
    const CVector evolved = exact_propagator(h, t).matrix * coherent_vector(space, psi_in).amplitudes;
    report.oracle = coherent_vector(space, psi_out).amplitudes.dot(evolved);
    report.oracle_kind = "eigendecomposition";
  }

  std::optional<PhaseSpaceQuadrature> refined;
  if (construction != Construction::resolvent && t != 0.0) {
    refined = build_rule(quad.num_modes(), 2 * quad.radial_order(), 2 * quad.angular_order());
  }
  if (construction == Construction::theorem1) report.advisory = ellipticity_advisory(p_wick, space);

  for (int n : n_list) {
    const auto start = std::chrono::steady_clock::now();
    ConvergenceRow row;
    row.n = n;
    const SliceConfig cfg{t, n, psi_in, psi_out};
    switch (construction) {
      case Construction::theorem1: {
        const SliceElement e = theorem1_element(p_wick, cfg, space, quad, refined ? &*refined : nullptr);
        row.element = e.value;
        row.quadrature_error = e.quadrature_error;
        break;
      }
      case Construction::theorem2: {
        const SliceElement e = theorem2_element(p_wick, cfg, space, quad, refined ? &*refined : nullptr);
        row.element = e.value;
        row.quadrature_error = e.quadrature_error;
        break;
      }
      case Construction::resolvent: {
        const CVector v = resolvent_power(p_op, t, n).matrix * coherent_vector(space, psi_in).amplitudes;
        row.element = coherent_vector(space, psi_out).amplitudes.dot(v);
        break;
      }
    }
    row.abs_error = std::abs(row.element - report.oracle);
    row.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    report.rows.push_back(row);
  }

  std::vector<int> ns;
  std::vector<double> errs;
  bool all_tiny = true;
  for (const auto& r : report.rows) {
    ns.push_back(r.n);
    errs.push_back(r.abs_error);
    all_tiny = all_tiny && r.abs_error < 1e-13;
  }
  report.fit_skipped = t == 0.0 || all_tiny;
  if (!report.fit_skipped) {
    for (double& e : errs) e = std::max(e, 1e-300);
    report.fitted_order = fit_order(ns, errs);
  }
  return report;
}

}  // namespace cspath
