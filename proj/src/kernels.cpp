#include "cspath/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cspath::kernels {

namespace {

constexpr std::size_t kSumBlock = 4096;

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

CMatrix monomial_table(const ModeSpace& space, const PhaseSpaceQuadrature& quad) {
  const int modes = space.num_modes();
  const int cutoff = space.cutoff();
  const auto nodes = static_cast<long>(quad.size());
  const auto dim = static_cast<Eigen::Index>(space.dim());
  CMatrix table(nodes, dim);

#pragma omp parallel
  {
    std::vector<Complex> powers(static_cast<std::size_t>(modes) * (cutoff + 1));
#pragma omp for schedule(static)
    for (long i = 0; i < nodes; ++i) {
      auto psi = quad.node(static_cast<std::size_t>(i));
      for (int k = 0; k < modes; ++k) {
        Complex* row = powers.data() + static_cast<std::size_t>(k) * (cutoff + 1);
        row[0] = 1.0;
        for (int n = 1; n <= cutoff; ++n) row[n] = row[n - 1] * psi[k] / std::sqrt(double(n));
      }
      for (Eigen::Index m = 0; m < dim; ++m) {
        const FockIndex& occ = space.state(static_cast<std::size_t>(m));
        Complex v = 1.0;
        for (int k = 0; k < modes; ++k) v *= powers[static_cast<std::size_t>(k) * (cutoff + 1) + occ[k]];
        table(i, m) = v;
      }
    }
  }
  return table;
}

void evaluate_at_nodes(const SymbolFn& f, const PhaseSpaceQuadrature& quad,
                       std::span<Complex> values) {
  const auto nodes = static_cast<long>(quad.size());
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < nodes; ++i) {
    try {
      values[static_cast<std::size_t>(i)] = f(quad.node(static_cast<std::size_t>(i)));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

Complex weighted_sum(std::span<const Complex> values, std::span<const double> weights) {
  const std::size_t n = values.size();
  const auto blocks = static_cast<long>((n + kSumBlock - 1) / kSumBlock);
  std::vector<Complex> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
  for (long b = 0; b < blocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kSumBlock;
    const std::size_t hi = std::min(n, lo + kSumBlock);
    Complex s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += weights[i] * values[i];
    partial[static_cast<std::size_t>(b)] = s;
  }
  Complex total = 0.0;
  for (const Complex& s : partial) total += s;
  return total;
}

CMatrix toeplitz_from_nodes(const CMatrix& table, std::span<const Complex> weighted) {
  // out = table^T diag(weighted) conj(table), one single-threaded GEMM per
  // fixed column block, so the bits do not depend on the thread count.
  constexpr Eigen::Index kBlock = 8;
  const Eigen::Map<const CVector> w(weighted.data(), static_cast<Eigen::Index>(weighted.size()));
  const CMatrix scaled = w.asDiagonal() * table.conjugate();
  const Eigen::Index dim = table.cols();
  CMatrix out(dim, dim);
  const long blocks = static_cast<long>((dim + kBlock - 1) / kBlock);
#pragma omp parallel for schedule(dynamic, 1)
  for (long b = 0; b < blocks; ++b) {
    const Eigen::Index first = b * kBlock;
    const Eigen::Index width = std::min(kBlock, dim - first);
    out.middleCols(first, width).noalias() = table.transpose() * scaled.middleCols(first, width);
  }
  return out;
}

void chain_step(const PhaseSpaceQuadrature& quad, std::span<const Complex> factor,
                std::span<const Complex> in, std::span<Complex> out) {
  const auto nodes = static_cast<long>(quad.size());
  const int modes = quad.num_modes();
  const Complex* flat = quad.flat_nodes().data();
  const auto weights = quad.weights();

  // w_x * in[x] is shared by every output node
  std::vector<Complex> weighted(static_cast<std::size_t>(nodes));
#pragma omp parallel for schedule(static)
  for (long x = 0; x < nodes; ++x) weighted[x] = weights[x] * in[x];

#pragma omp parallel for schedule(static)
  for (long y = 0; y < nodes; ++y) {
    const Complex* ny = flat + y * modes;
    Complex s = 0.0;
    for (long x = 0; x < nodes; ++x) {
      const Complex* nx = flat + x * modes;
      Complex e = 0.0;
      for (int k = 0; k < modes; ++k) e += std::conj(ny[k]) * nx[k];
      s += std::exp(e) * weighted[x];
    }
    out[y] = factor[y] * s;
  }
}

}  // namespace cspath::kernels
