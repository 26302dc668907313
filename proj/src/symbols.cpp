#include "cspath/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <sstream>

#include "cspath/kernels.hpp"

namespace cspath {

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// sqrt(n! / (n - r)!) per mode, i.e. the amplitude of lowering |n> by r.
double lowering_amplitude(const FockIndex& n, const FockIndex& r) {
  double a = 1.0;
  for (std::size_t k = 0; k < n.size(); ++k) {
    for (int j = 0; j < r[k]; ++j) a *= std::sqrt(static_cast<double>(n[k] - j));
  }
  return a;
}

// Calls f(sub) for every multi-index 0 <= sub <= top.
template <typename F>
void for_each_below(const FockIndex& top, F&& f) {
  FockIndex sub(top.size(), 0);
  while (true) {
    f(static_cast<const FockIndex&>(sub));
    std::size_t k = 0;
    while (k < top.size() && sub[k] == top[k]) sub[k++] = 0;
    if (k == top.size()) return;
    ++sub[k];
  }
}

// Calls f(g) for every multi-index g in N^modes with |g| == n.
template <typename F>
void for_each_of_total(int modes, int n, F&& f) {
  FockIndex g(modes, 0);
  auto rec = [&](auto&& self, int k, int left) -> void {
    if (k == modes - 1) {
      g[k] = left;
      f(static_cast<const FockIndex&>(g));
      return;
    }
    for (int v = left; v >= 0; --v) {
      g[k] = v;
      self(self, k + 1, left - v);
    }
  };
  rec(rec, 0, n);
}

FockIndex minus(const FockIndex& a, const FockIndex& b) {
  FockIndex r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] - b[k];
  return r;
}

FockIndex plus(const FockIndex& a, const FockIndex& b) {
  FockIndex r(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] + b[k];
  return r;
}

// int D[eta] e^{-|eta|^2} P(psi + eta) expanded over the differential order.
// Each term pairs eta-bar^a eta^b; the 2j-th Frechet differential along eta
// collects the |a| + |b| = 2j part with a factor (2j)!, which cancels the
// 1/(2j)! of the conversion sum, leaving sign^j.
PolySymbol gaussian_shift(const PolySymbol& p, const GaussianMomentTable& table, double sign) {
  PolySymbol out(p.num_modes());
  for (const auto& [mono, c] : p.terms()) {
    for_each_below(mono.bar, [&](const FockIndex& a) {
      for_each_below(mono.hol, [&](const FockIndex& b) {
        // int eta-bar^a eta^b = moment(b, a) in the table's (psi^x conj(psi)^y) order
        const double mom = table.moment(b, a);
        if (mom == 0.0) return;
        const int order = total_occupation(a) + total_occupation(b);
        double comb = 1.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
          comb *= binomial(mono.bar[k], a[k]) * binomial(mono.hol[k], b[k]);
        }
        const double weight = std::pow(sign, order / 2);
        out.add(minus(mono.bar, a), minus(mono.hol, b), c * (comb * mom * weight));
      });
    });
  }
  return out;
}

}  // namespace

SymbolFn as_function(PolySymbol p) {
  auto shared = std::make_shared<const PolySymbol>(std::move(p));
  return [shared](std::span<const Complex> psi) { return (*shared)(psi); };
}

FockOperator wick_quantize(const PolySymbol& p, const ModeSpace& space) {
  if (p.num_modes() != space.num_modes()) {
    throw std::invalid_argument("wick_quantize: symbol and space have different mode counts");
  }
  const auto dim = static_cast<Eigen::Index>(space.dim());
  CMatrix q = CMatrix::Zero(dim, dim);
  for (std::size_t col = 0; col < space.dim(); ++col) {
    const FockIndex& n = space.state(col);
    for (const auto& [mono, c] : p.terms()) {
      // C^bar A^hol |n>: lower by hol, then raise by bar
      bool fits = true;
      for (std::size_t k = 0; k < n.size(); ++k) fits = fits && n[k] >= mono.hol[k];
      if (!fits) continue;
      const FockIndex mid = minus(n, mono.hol);
      const FockIndex m = plus(mid, mono.bar);
      const long row = space.index_of(m);
      if (row < 0) continue;
      const double amp = lowering_amplitude(n, mono.hol) * lowering_amplitude(m, mono.bar);
      q(row, static_cast<Eigen::Index>(col)) += c * amp;
    }
  }
  return {space, std::move(q)};
}

SymbolFn wick_symbol_of(const FockOperator& q) {
  auto shared = std::make_shared<const FockOperator>(q);
  return [shared](std::span<const Complex> psi) {
    const FockVector v = coherent_vector(shared->space, psi);
    double norm2 = 0.0;
    for (const Complex& z : psi) norm2 += std::norm(z);
    return std::exp(-norm2) * v.amplitudes.dot(shared->matrix * v.amplitudes);
  };
}

PolySymbol berezin_from_wick(const PolySymbol& p, const GaussianMomentTable& table) {
  return gaussian_shift(p, table, -1.0);
}

PolySymbol wick_from_berezin(const PolySymbol& p, const GaussianMomentTable& table) {
  return gaussian_shift(p, table, 1.0);
}

FockOperator toeplitz_quantize_poly(const PolySymbol& p, const ModeSpace& space,
                                    const GaussianMomentTable& table) {
  if (p.num_modes() != space.num_modes()) {
    throw std::invalid_argument("toeplitz_quantize_poly: symbol and space have different mode counts");
  }
  const auto dim = static_cast<Eigen::Index>(space.dim());
  CMatrix q = CMatrix::Zero(dim, dim);
  for (std::size_t col = 0; col < space.dim(); ++col) {
    const FockIndex& n = space.state(col);
    double fact_n = 1.0;
    for (int v : n) fact_n *= factorial(v);
    for (const auto& [mono, c] : p.terms()) {
      // psi^(hol + m) conj(psi)^(bar + n) survives only for m = n + bar - hol
      FockIndex m(n.size());
      bool valid = true;
      for (std::size_t k = 0; k < n.size(); ++k) {
        m[k] = n[k] + mono.bar[k] - mono.hol[k];
        valid = valid && m[k] >= 0;
      }
      if (!valid) continue;
      const long row = space.index_of(m);
      if (row < 0) continue;
      double fact_m = 1.0;
      for (int v : m) fact_m *= factorial(v);
      const double mom = table.moment(plus(mono.hol, m), plus(mono.bar, n));
      q(row, static_cast<Eigen::Index>(col)) += c * (mom / std::sqrt(fact_m * fact_n));
    }
  }
  return {space, std::move(q)};
}

namespace {

CMatrix toeplitz_on_rule(const SymbolFn& f, const ModeSpace& space,
                         const PhaseSpaceQuadrature& quad) {
  if (quad.num_modes() != space.num_modes()) {
    throw std::invalid_argument("toeplitz_quantize_fn: rule and space have different mode counts");
  }
  std::vector<Complex> values(quad.size());
  kernels::evaluate_at_nodes(f, quad, values);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag())) {
      std::ostringstream msg;
      msg << "toeplitz_quantize_fn: symbol is not finite at node " << i;
      throw QuadratureError(msg.str());
    }
    values[i] *= quad.weight(i);
  }
  const CMatrix table = kernels::monomial_table(space, quad);
  return kernels::toeplitz_from_nodes(table, values);
}

}  // namespace

ToeplitzResult toeplitz_quantize_fn(const SymbolFn& f, const ModeSpace& space,
                                    const PhaseSpaceQuadrature& quad, ToeplitzOptions options) {
  ToeplitzResult result{{space, toeplitz_on_rule(f, space, quad)}, 0.0};
  if (!options.refine) return result;

  std::optional<PhaseSpaceQuadrature> built;
  const PhaseSpaceQuadrature* refined = options.refined;
  if (refined == nullptr) {
    built = build_rule(quad.num_modes(), 2 * quad.radial_order(), 2 * quad.angular_order());
    refined = &*built;
  }
  const CMatrix fine = toeplitz_on_rule(f, space, *refined);
  result.refinement_error = max_abs_entry(fine - result.op.matrix);
  if (!(result.refinement_error <= options.tolerance)) {
    std::ostringstream msg;
    msg << "toeplitz_quantize_fn: quadrature not converged, refinement changed entries by "
        << result.refinement_error << " (tolerance " << options.tolerance << ")";
    throw QuadratureError(msg.str());
  }
  return result;
}

BerezinFit berezin_symbol_of(const FockOperator& q, int degree, double tolerance, int margin) {
  if (degree < 0) throw std::invalid_argument("berezin_symbol_of: degree must be >= 0");
  const ModeSpace& space = q.space;
  if (margin < 0) margin = degree;
  const int level = space.cutoff() - margin;
  if (level < degree) {
    throw std::invalid_argument("berezin_symbol_of: cutoff too small, need D - margin >= degree");
  }
  const int modes = space.num_modes();
  const auto block = static_cast<Eigen::Index>(space.block_size(level));

  // unknowns: every monomial of total degree <= degree
  std::vector<Monomial> unknowns;
  for (int d = 0; d <= degree; ++d) {
    for (int dbar = 0; dbar <= d; ++dbar) {
      for_each_of_total(modes, dbar, [&](const FockIndex& bar) {
        for_each_of_total(modes, d - dbar, [&](const FockIndex& hol) {
          unknowns.push_back({bar, hol});
        });
      });
    }
  }

  const ModeSpace sub = space.with_cutoff(level);
  const auto cols = static_cast<Eigen::Index>(unknowns.size());
  CMatrix design(block * block, cols);
  for (Eigen::Index u = 0; u < cols; ++u) {
    const CMatrix t =
        toeplitz_quantize_poly(PolySymbol::monomial(modes, unknowns[u].bar, unknowns[u].hol), sub)
            .matrix;
    design.col(u) = Eigen::Map<const Eigen::VectorXcd>(t.data(), block * block);
  }
  const CMatrix target_block = q.matrix.topLeftCorner(block, block);
  const Eigen::VectorXcd target = Eigen::Map<const Eigen::VectorXcd>(target_block.data(), block * block);

  // column equilibration; entries grow like n^{degree/2}
  Eigen::VectorXd scale(cols);
  for (Eigen::Index u = 0; u < cols; ++u) {
    scale(u) = design.col(u).norm();
    if (scale(u) > 0.0) design.col(u) /= scale(u);
  }
  const Eigen::VectorXcd solution = design.colPivHouseholderQr().solve(target);

  PolySymbol fit(modes);
  double largest = 0.0;
  for (Eigen::Index u = 0; u < cols; ++u) {
    largest = std::max(largest, std::abs(solution(u) / scale(u)));
  }
  for (Eigen::Index u = 0; u < cols; ++u) {
    const Complex c = solution(u) / scale(u);
    if (std::abs(c) > 1e-13 * std::max(1.0, largest)) fit.add(unknowns[u].bar, unknowns[u].hol, c);
  }

  const CMatrix rebuilt = toeplitz_quantize_poly(fit, sub).matrix;
  const double residual = max_abs_entry(rebuilt - target_block);
  const double allowed = tolerance * std::max(1.0, max_abs_entry(target_block));
  if (!(residual <= allowed)) {
    std::ostringstream msg;
    msg << "berezin_symbol_of: no polynomial Berezin symbol of degree " << degree
        << " (residual " << residual << ", allowed " << allowed << ")";
    throw NoSymbolError(msg.str(), residual);
  }
  return {std::move(fit), residual};
}

PolySymbol compose_expansion(const PolySymbol& q2, const PolySymbol& q1, int order) {
  if (order < 0) throw std::invalid_argument("compose_expansion: order must be >= 0");
  if (q2.num_modes() != q1.num_modes()) {
    throw std::invalid_argument("compose_expansion: symbols have different mode counts");
  }
  const int modes = q1.num_modes();
  const int last = std::min(order, std::min(q2.degree(), q1.degree()));
  PolySymbol sum(modes);
  for (int n = 0; n <= last; ++n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    for_each_of_total(modes, n, [&](const FockIndex& g) {
      PolySymbol left = q2;
      PolySymbol right = q1;
      double g_factorial = 1.0;
      for (int k = 0; k < modes; ++k) {
        for (int r = 0; r < g[k]; ++r) {
          left = left.diff_bar(k);
          right = right.diff_hol(k);
        }
        g_factorial *= factorial(g[k]);
      }
      if (left.is_zero() || right.is_zero()) return;
      sum += Complex(sign / g_factorial) * (left * right);
    });
  }
  return sum;
}

PolySymbol phi_polynomial(std::span<const double> coeffs, const ModeSpace& space) {
  const int modes = space.num_modes();
  PolySymbol p(modes);
  if (coeffs.empty()) return p;
  p.add(FockIndex(modes, 0), FockIndex(modes, 0), coeffs[0]);
  for (int m = 1; m < static_cast<int>(coeffs.size()); ++m) {
    if (coeffs[m] == 0.0) continue;
    // ((psi + conj psi) / 2)^m = 2^-m sum_j binom(m, j) conj(psi)^j psi^(m-j)
    const double scale = coeffs[m] * std::ldexp(1.0, -m);
    for (int k = 0; k < modes; ++k) {
      for (int j = 0; j <= m; ++j) {
        FockIndex bar(modes, 0), hol(modes, 0);
        bar[k] = j;
        hol[k] = m - j;
        p.add(bar, hol, scale * binomial(m, j));
      }
    }
  }
  return p;
}

}  // namespace cspath
