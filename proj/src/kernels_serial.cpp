// Reference loops for kernels.cpp.  Kept deliberately plain.

#include <cmath>

#include "cspath/kernels.hpp"

namespace cspath::kernels::serial {

CMatrix monomial_table(const ModeSpace& space, const PhaseSpaceQuadrature& quad) {
  CMatrix table(static_cast<Eigen::Index>(quad.size()), static_cast<Eigen::Index>(space.dim()));
  for (std::size_t i = 0; i < quad.size(); ++i) {
    auto psi = quad.node(i);
    for (std::size_t m = 0; m < space.dim(); ++m) {
      Complex v = 1.0;
      for (int k = 0; k < space.num_modes(); ++k) {
        const int n = space.state(m)[k];
        v *= std::pow(psi[k], n) / std::sqrt(std::tgamma(n + 1.0));
      }
      table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = v;
    }
  }
  return table;
}

void evaluate_at_nodes(const SymbolFn& f, const PhaseSpaceQuadrature& quad,
                       std::span<Complex> values) {
  for (std::size_t i = 0; i < quad.size(); ++i) values[i] = f(quad.node(i));
}

Complex weighted_sum(std::span<const Complex> values, std::span<const double> weights) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i];
  return s;
}

CMatrix toeplitz_from_nodes(const CMatrix& table, std::span<const Complex> weighted) {
  const Eigen::Index dim = table.cols();
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Eigen::Index m = 0; m < dim; ++m) {
    for (Eigen::Index n = 0; n < dim; ++n) {
      Complex s = 0.0;
      for (Eigen::Index i = 0; i < table.rows(); ++i) {
        s += table(i, m) * weighted[static_cast<std::size_t>(i)] * std::conj(table(i, n));
      }
      out(m, n) = s;
    }
  }
  return out;
}

void chain_step(const PhaseSpaceQuadrature& quad, std::span<const Complex> factor,
                std::span<const Complex> in, std::span<Complex> out) {
  for (std::size_t y = 0; y < quad.size(); ++y) {
    auto ny = quad.node(y);
    Complex s = 0.0;
    for (std::size_t x = 0; x < quad.size(); ++x) {
      auto nx = quad.node(x);
      Complex e = 0.0;
      for (int k = 0; k < quad.num_modes(); ++k) e += std::conj(ny[k]) * nx[k];
      s += quad.weight(x) * std::exp(e) * in[x];
    }
    out[y] = factor[y] * s;
  }
}

}  // namespace cspath::kernels::serial
