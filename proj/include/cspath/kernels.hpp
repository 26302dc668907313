#pragma once

// Data-parallel inner loops of the phase-space integrals.  The default
// namespace holds the OpenMP versions used by the library; kernels::serial
// holds plain reference loops with identical signatures, kept for the
// equivalence tests and the benchmark.  Every parallel loop writes disjoint
// outputs and sums in a fixed order, so results do not depend on the thread
// count.

#include <span>

#include "cspath/fock.hpp"
#include "cspath/quadrature.hpp"

namespace cspath::kernels {

/// Node-major monomial table: row i, column m holds prod_k psi_{i,k}^{n_k} / sqrt(n_k!)
/// for node i and basis state m.
CMatrix monomial_table(const ModeSpace& space, const PhaseSpaceQuadrature& quad);

/// values[i] = f(node_i).
void evaluate_at_nodes(const SymbolFn& f, const PhaseSpaceQuadrature& quad,
                       std::span<Complex> values);

/// sum_i weights[i] * values[i] in fixed-size blocks.
Complex weighted_sum(std::span<const Complex> values, std::span<const double> weights);

/// out(m, n) = sum_i table(i, m) * weighted[i] * conj(table(i, n)).
CMatrix toeplitz_from_nodes(const CMatrix& table, std::span<const Complex> weighted);

/// One link of the chained Toeplitz-kernel contraction:
///   out[y] = factor[y] * sum_x w_x exp(<node_y | node_x>) in[x].
void chain_step(const PhaseSpaceQuadrature& quad, std::span<const Complex> factor,
                std::span<const Complex> in, std::span<Complex> out);

namespace serial {
CMatrix monomial_table(const ModeSpace& space, const PhaseSpaceQuadrature& quad);
void evaluate_at_nodes(const SymbolFn& f, const PhaseSpaceQuadrature& quad,
                       std::span<Complex> values);
Complex weighted_sum(std::span<const Complex> values, std::span<const double> weights);
CMatrix toeplitz_from_nodes(const CMatrix& table, std::span<const Complex> weighted);
void chain_step(const PhaseSpaceQuadrature& quad, std::span<const Complex> factor,
                std::span<const Complex> in, std::span<Complex> out);
}  // namespace serial

/// Number of threads OpenMP will use (1 when built without OpenMP).
int max_threads();

}  // namespace cspath::kernels
