#include "cspath/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace cspath {

namespace {

void require_same_space(const ModeSpace& a, const ModeSpace& b, const char* what) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(what) + ": operands live on different mode spaces");
  }
}

}  // namespace

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  require_same_space(a.space, b.space, "operator*");
  return {a.space, a.matrix * b.matrix};
}

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
  require_same_space(a.space, b.space, "operator+");
  return {a.space, a.matrix + b.matrix};
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) {
  require_same_space(a.space, b.space, "operator-");
  return {a.space, a.matrix - b.matrix};
}

FockOperator operator*(Complex s, const FockOperator& a) { return {a.space, s * a.matrix}; }

FockVector operator*(const FockOperator& a, const FockVector& v) {
  require_same_space(a.space, v.space, "operator* (vector)");
  return {v.space, a.matrix * v.amplitudes};
}

Complex inner(const FockVector& a, const FockVector& b) {
  require_same_space(a.space, b.space, "inner");
  return a.amplitudes.dot(b.amplitudes);  // Eigen's dot conjugates the left operand
}

FockOperator identity_operator(const ModeSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.dim());
  return {space, CMatrix::Identity(n, n)};
}

LadderOperators ladder_operators(const ModeSpace& space) {
  const int modes = space.num_modes();
  const auto n = static_cast<Eigen::Index>(space.dim());
  LadderOperators ops;
  for (int k = 0; k < modes; ++k) {
    CMatrix a = CMatrix::Zero(n, n);
    for (std::size_t col = 0; col < space.dim(); ++col) {
      FockIndex lowered = space.state(col);
      if (lowered[k] == 0) continue;
      const double amp = std::sqrt(static_cast<double>(lowered[k]));
      lowered[k] -= 1;
      const long row = space.index_of(lowered);
      a(row, static_cast<Eigen::Index>(col)) = amp;
    }
    // Within the truncated basis C_k is exactly the transpose of A_k; states
    // on the top shell have no image, which is the truncation convention.
    ops.creation.push_back({space, a.transpose()});
    ops.annihilation.push_back({space, std::move(a)});
  }
  return ops;
}

FockOperator free_hamiltonian(const ModeSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.dim());
  CMatrix h = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < space.dim(); ++i) {
    double e = 0.0;
    for (int k = 0; k < space.num_modes(); ++k) {
      e += space.frequencies()[k] * space.state(i)[k];
    }
    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = e;
  }
  return {space, std::move(h)};
}

FockOperator h_rho_operator(const ModeSpace& space, double rho) {
  if (!(rho >= 0.0)) throw std::invalid_argument("h_rho_operator: rho must be >= 0");
  std::vector<double> weight(space.num_modes());
  for (int k = 0; k < space.num_modes(); ++k) {
    weight[k] = std::pow(space.scale_weights()[k], -2.0 * rho);
  }
  const auto n = static_cast<Eigen::Index>(space.dim());
  CMatrix h = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < space.dim(); ++i) {
    double e = 0.0;
    for (int k = 0; k < space.num_modes(); ++k) e += weight[k] * space.state(i)[k];
    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = e;
  }
  return {space, std::move(h)};
}

FockVector coherent_vector(const ModeSpace& space, std::span<const Complex> psi) {
  if (static_cast<int>(psi.size()) != space.num_modes()) {
    throw std::invalid_argument("coherent_vector: amplitude has wrong number of modes");
  }
  const int modes = space.num_modes();
  const int cutoff = space.cutoff();
  // per-mode table psi_k^n / sqrt(n!)
  std::vector<std::vector<Complex>> powers(modes, std::vector<Complex>(cutoff + 1));
  for (int k = 0; k < modes; ++k) {
    powers[k][0] = 1.0;
    for (int n = 1; n <= cutoff; ++n) {
      powers[k][n] = powers[k][n - 1] * psi[k] / std::sqrt(static_cast<double>(n));
    }
  }
  CVector v(static_cast<Eigen::Index>(space.dim()));
  for (std::size_t i = 0; i < space.dim(); ++i) {
    Complex c = 1.0;
    for (int k = 0; k < modes; ++k) c *= powers[k][space.state(i)[k]];
    v(static_cast<Eigen::Index>(i)) = c;
  }
  return {space, std::move(v)};
}

Complex coherent_overlap(std::span<const Complex> psi2, std::span<const Complex> psi1) {
  if (psi2.size() != psi1.size()) {
    throw std::invalid_argument("coherent_overlap: amplitudes have different sizes");
  }
  Complex s = 0.0;
  for (std::size_t k = 0; k < psi1.size(); ++k) s += std::conj(psi2[k]) * psi1[k];
  return std::exp(s);
}

double tail_bound(const ModeSpace& space, std::span<const Complex> psi) {
  double x = 0.0;
  for (const Complex& z : psi) x += std::norm(z);
  if (x == 0.0) return 0.0;
  const int first = space.cutoff() + 1;
  const double log_x = std::log(x);
  double sum = 0.0;
  for (int d = first; d < first + 2000; ++d) {
    const double term = std::exp(d * log_x - std::lgamma(d + 1.0));
    sum += term;
    // terms decrease geometrically once d > x
    if (d > x && term <= 1e-17 * sum) break;
  }
  return sum;
}

FockOperator interior_projector(const ModeSpace& space, int margin) {
  if (margin < 0 || margin > space.cutoff()) {
    throw std::invalid_argument("interior_projector: margin must lie in [0, cutoff]");
  }
  const auto n = static_cast<Eigen::Index>(space.dim());
  const auto keep = static_cast<Eigen::Index>(space.block_size(space.cutoff() - margin));
  CMatrix p = CMatrix::Zero(n, n);
  p.topLeftCorner(keep, keep).setIdentity();
  return {space, std::move(p)};
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double max_abs_entry(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace cspath
