#pragma once

#include <span>

#include "cspath/fock.hpp"
#include "cspath/poly_symbol.hpp"
#include "cspath/quadrature.hpp"

namespace cspath {

/// p as a black-box phase-space function.
SymbolFn as_function(PolySymbol p);

/// Normal-ordered quantization: sum over terms of c * C^bar A^hol.  The result
/// is the exact compression of the operator to the truncated basis.
FockOperator wick_quantize(const PolySymbol& p, const ModeSpace& space);

/// psi -> e^{-|psi|^2} <e^psi | Q | e^psi>, with the coherent vectors cut at
/// the space's cutoff (accurate up to tail_bound).
SymbolFn wick_symbol_of(const FockOperator& q);

/// Berezin symbol from the Wick symbol by the finite sum
///   P^b(psi) = sum_j (-1)^j / (2j)! int D[eta] e^{-|eta|^2} (d^{2j} P^w)(psi; eta)
/// where d^{2j} is the real Frechet differential in direction eta.  The
/// Gaussian integrals are taken exactly from `table`.
PolySymbol berezin_from_wick(const PolySymbol& p,
                             const GaussianMomentTable& table = GaussianMomentTable::standard());

/// Inverse of berezin_from_wick: Gaussian smoothing
///   P^w(psi) = int D[eta] e^{-|eta|^2} P^b(psi + eta).
PolySymbol wick_from_berezin(const PolySymbol& p,
                             const GaussianMomentTable& table = GaussianMomentTable::standard());

/// Toeplitz (anti-Wick) quantization with exact Gaussian moments:
///   <m|Q|n> = int D[psi] e^{-|psi|^2} p(psi) psi^m conj(psi)^n / sqrt(m! n!).
FockOperator toeplitz_quantize_poly(const PolySymbol& p, const ModeSpace& space,
                                    const GaussianMomentTable& table = GaussianMomentTable::standard());

struct ToeplitzOptions {
  /// Largest acceptable max-entry change between the rule and its refinement.
  double tolerance = 1e-10;
  bool refine = true;
  /// Refined rule to compare against; built with doubled orders when null.
  const PhaseSpaceQuadrature* refined = nullptr;
};

struct ToeplitzResult {
  FockOperator op;
  /// max |Q(rule) - Q(refined rule)|, or 0 when refinement was skipped.
  double refinement_error = 0.0;
};

/// Toeplitz quantization of a non-polynomial symbol: the same matrix-element
/// integral with the Gaussian measure replaced by `quad`.  Raises
/// QuadratureError when the refinement check exceeds options.tolerance or f is
/// not finite at a node.
ToeplitzResult toeplitz_quantize_fn(const SymbolFn& f, const ModeSpace& space,
                                    const PhaseSpaceQuadrature& quad, ToeplitzOptions options = {});

struct BerezinFit {
  PolySymbol symbol;
  /// max-entry mismatch of toeplitz_quantize_poly(symbol) against Q on the block
  double residual = 0.0;
};

/// Recovers the polynomial Berezin symbol of degree <= `degree` from Q by least
/// squares on the interior block {|n| <= D - margin}; margin defaults to
/// `degree`, which keeps products of truncated operators exact on the block.
/// Raises NoSymbolError when the residual exceeds tolerance * max(1, max|Q|).
BerezinFit berezin_symbol_of(const FockOperator& q, int degree, double tolerance = 1e-10,
                             int margin = -1);

/// Partial sums of the Berezin composition expansion
///   (Q2 Q1)^b = sum_n (-1)^n sum_{|g| = n} (1/g!) dbar^g q2 * d^g q1,
/// dbar = d/d conj(psi), d = d/d psi.  For polynomials the full sum (order >=
/// min degree) is exact.
PolySymbol compose_expansion(const PolySymbol& q2, const PolySymbol& q1, int order);

/// coeffs[0] + sum_{m >= 1} coeffs[m] sum_k phi_k^m with phi_k = (psi_k + conj psi_k) / 2.
PolySymbol phi_polynomial(std::span<const double> coeffs, const ModeSpace& space);

}  // namespace cspath
