#include "cspath/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cspath/kernels.hpp"

namespace cspath {

GaussianMomentTable::GaussianMomentTable(int max_degree) {
  if (max_degree < 0 || max_degree > 170) {
    throw std::invalid_argument("GaussianMomentTable: max_degree must lie in [0, 170]");
  }
  diagonal_.resize(static_cast<std::size_t>(max_degree) + 1);
  diagonal_[0] = 1.0;
  for (int a = 1; a <= max_degree; ++a) diagonal_[a] = diagonal_[a - 1] * a;
}

const GaussianMomentTable& GaussianMomentTable::standard() {
  static const GaussianMomentTable table(170);
  return table;
}

double GaussianMomentTable::moment(int a, int b) const {
  if (a < 0 || b < 0) throw std::invalid_argument("gaussian moment: negative degree");
  if (a > max_degree() || b > max_degree()) {
    throw std::out_of_range("gaussian moment: degree exceeds table (max " +
                            std::to_string(max_degree()) + ")");
  }
  return a == b ? diagonal_[a] : 0.0;
}

double GaussianMomentTable::moment(std::span<const int> a, std::span<const int> b) const {
  if (a.size() != b.size()) throw std::invalid_argument("gaussian moment: degree vectors differ in length");
  double r = 1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    r *= moment(a[k], b[k]);
    if (r == 0.0) return 0.0;
  }
  return r;
}

GaussianMomentTable GaussianMomentTable::corrupted(int degree, double factor) const {
  GaussianMomentTable copy = *this;
  copy.diagonal_.at(static_cast<std::size_t>(degree)) *= factor;
  return copy;
}

double gaussian_moment(std::span<const int> a, std::span<const int> b) {
  return GaussianMomentTable::standard().moment(a, b);
}

namespace {

// L_n(x) and L_{n+1}(x) by the three-term recurrence, rescaled to avoid
// overflow.  Returns the pair scaled by exp(-log_scale).  Extended precision:
// in double the recurrence costs ~n eps in the weights.
struct LaguerrePair {
  long double ln = 0.0L;
  long double ln1 = 0.0L;
  long double log_scale = 0.0L;
};

LaguerrePair laguerre_pair(int n, long double x) {
  long double prev = 1.0L;     // L_0
  long double cur = 1.0L - x;  // L_1
  long double log_scale = 0.0L;
  if (n == 0) return {prev, cur, 0.0L};
  for (int k = 1; k < n + 1; ++k) {
    const long double next = ((2.0L * k + 1.0L - x) * cur - k * prev) / (k + 1.0L);
    prev = cur;
    cur = next;
    const long double mag = std::max(std::abs(prev), std::abs(cur));
    if (mag > 1e100L) {
      prev /= mag;
      cur /= mag;
      log_scale += std::log(mag);
    }
  }
  return {prev, cur, log_scale};  // prev = L_n, cur = L_{n+1}
}

}  // namespace

RadialRule gauss_laguerre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_laguerre: order must be >= 1");
  const int n = order;

  // Golub-Welsch start: eigenvalues of the Jacobi matrix.
  Eigen::VectorXd diag(n), off(std::max(n - 1, 1));
  for (int i = 0; i < n; ++i) diag(i) = 2.0 * i + 1.0;
  for (int i = 0; i + 1 < n; ++i) off(i) = i + 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off.head(n - 1), Eigen::EigenvaluesOnly);

  RadialRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    long double x = solver.eigenvalues()(i);
    // Newton polish: x L_n'(x) = n (L_n - L_{n-1}); the ratio is scale-free.
    for (int iter = 0; iter < 6; ++iter) {
      const LaguerrePair lower = laguerre_pair(n - 1, x);  // ln = L_{n-1}, ln1 = L_n
      const long double step = x * lower.ln1 / (n * (lower.ln1 - lower.ln));
      x -= step;
      if (std::abs(step) <= 1e-19L * x) break;
    }
    rule.nodes[i] = static_cast<double>(x);
    // w_i = x_i / ((n+1)^2 L_{n+1}(x_i)^2), evaluated in log space for relative accuracy
    const LaguerrePair at = laguerre_pair(n, x);
    const long double log_w = std::log(x) - 2.0L * std::log(n + 1.0L) -
                              2.0L * (std::log(std::abs(at.ln1)) + at.log_scale);
    rule.weights[i] = static_cast<double>(std::exp(log_w));
  }
  return rule;
}

int PhaseSpaceQuadrature::guaranteed_degree() const {
  return std::min(2 * radial_order_ - 1, angular_order_ - 1);
}

double PhaseSpaceQuadrature::max_radius() const {
  double r = 0.0;
  for (const Complex& z : nodes_) r = std::max(r, std::abs(z));
  return r;
}

namespace {

struct ModeRule {
  std::vector<Complex> nodes;
  std::vector<double> weights;
};

ModeRule single_mode_rule(int radial_order, int angular_order) {
  const RadialRule radial = gauss_laguerre(radial_order);
  ModeRule rule;
  for (int r = 0; r < radial_order; ++r) {
    const double rad = std::sqrt(radial.nodes[r]);
    for (int j = 0; j < angular_order; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / angular_order;
      rule.nodes.push_back(std::polar(rad, theta));
      rule.weights.push_back(radial.weights[r] / angular_order);
    }
  }
  return rule;
}

// For the polar product rule the monomial psi^a conj(psi)^b factors into a
// radial sum over u^{(a+b)/2} and an angular sum over e^{i(a-b)theta}.
double exactness_error(const RadialRule& radial, int angular_order, int guaranteed,
                       const GaussianMomentTable& table) {
  std::vector<double> log_nodes(radial.nodes.size());
  for (std::size_t r = 0; r < radial.nodes.size(); ++r) log_nodes[r] = std::log(radial.nodes[r]);
  double worst = 0.0;
  for (int a = 0; a <= guaranteed; ++a) {
    for (int b = 0; a + b <= guaranteed; ++b) {
      const double half = 0.5 * (a + b);
      double radial_sum = 0.0;
      for (std::size_t r = 0; r < radial.nodes.size(); ++r) {
        radial_sum += radial.weights[r] * std::exp(half * log_nodes[r]);
      }
      Complex angular_sum = 0.0;
      for (int j = 0; j < angular_order; ++j) {
        angular_sum += std::polar(1.0, 2.0 * std::numbers::pi * (a - b) * j / angular_order);
      }
      const Complex q = radial_sum * angular_sum / double(angular_order);
      const double scale = std::exp(0.5 * (std::lgamma(a + 1.0) + std::lgamma(b + 1.0)));
      worst = std::max(worst, std::abs(q - table.moment(a, b)) / scale);
    }
  }
  return worst;
}

constexpr std::size_t kMaxNodes = 50'000'000;

}  // namespace

double rule_exactness_error(int radial_order, int angular_order, const GaussianMomentTable& table) {
  const int guaranteed = std::min({2 * radial_order - 1, angular_order - 1, table.max_degree()});
  return exactness_error(gauss_laguerre(radial_order), angular_order, guaranteed, table);
}

PhaseSpaceQuadrature build_rule(int num_modes, int radial_order, int angular_order,
                                const GaussianMomentTable& table) {
  if (num_modes < 1) throw std::invalid_argument("build_rule: num_modes must be >= 1");
  if (radial_order < 1 || angular_order < 1) {
    throw std::invalid_argument("build_rule: orders must be >= 1");
  }
  const std::size_t per_mode = static_cast<std::size_t>(radial_order) * angular_order;
  std::size_t total = 1;
  for (int k = 0; k < num_modes; ++k) {
    if (total > kMaxNodes / per_mode) {
      throw std::invalid_argument("build_rule: tensor rule would exceed " +
                                  std::to_string(kMaxNodes) + " nodes");
    }
    total *= per_mode;
  }

  if (const double err = rule_exactness_error(radial_order, angular_order, table); !(err <= 1e-12)) {
    std::ostringstream msg;
    msg << "build_rule: rule (" << radial_order << ", " << angular_order
        << ") disagrees with the moment table by " << err << " (tolerance 1e-12)";
    throw QuadratureError(msg.str());
  }

  const ModeRule rule = single_mode_rule(radial_order, angular_order);
  PhaseSpaceQuadrature quad;
  quad.num_modes_ = num_modes;
  quad.radial_order_ = radial_order;
  quad.angular_order_ = angular_order;
  quad.nodes_.resize(total * num_modes);
  quad.weights_.resize(total);
  // mixed-radix enumeration, mode 0 slowest
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    double w = 1.0;
    for (int k = num_modes - 1; k >= 0; --k) {
      const std::size_t local = rest % per_mode;
      rest /= per_mode;
      quad.nodes_[i * num_modes + k] = rule.nodes[local];
      w *= rule.weights[local];
    }
    quad.weights_[i] = w;
  }
  return quad;
}

Complex integrate(const SymbolFn& f, const PhaseSpaceQuadrature& quad) {
  std::vector<Complex> values(quad.size());
  kernels::evaluate_at_nodes(f, quad, values);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag())) {
      std::ostringstream msg;
      msg << "integrate: non-finite integrand at node " << i << " (";
      for (const Complex& z : quad.node(i)) msg << ' ' << z;
      msg << " )";
      throw QuadratureError(msg.str());
    }
  }
  return kernels::weighted_sum(values, quad.weights());
}

}  // namespace cspath
