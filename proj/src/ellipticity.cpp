#include "cspath/ellipticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cspath {

double scale_norm(std::span<const Complex> psi, std::span<const double> scale_weights, double rho) {
  if (psi.size() != scale_weights.size()) {
    throw std::invalid_argument("scale_norm: point and scale weights differ in length");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    s += std::pow(scale_weights[k], -2.0 * rho) * std::norm(psi[k]);
  }
  return std::sqrt(s);
}

namespace {

using Point = std::vector<Complex>;

void normalize(Point& psi, std::span<const double> weights, double rho) {
  const double n = scale_norm(psi, weights, rho);
  for (Complex& z : psi) z /= n;
}

Point random_point(int modes, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Point psi(modes);
  for (Complex& z : psi) z = {gauss(rng), gauss(rng)};
  return psi;
}

// Unit points along each mode axis at `phases` equispaced phases.
std::vector<Point> axis_points(int modes, int phases) {
  std::vector<Point> out;
  for (int k = 0; k < modes; ++k) {
    for (int j = 0; j < phases; ++j) {
      Point psi(modes, 0.0);
      psi[k] = std::polar(1.0, 2.0 * std::numbers::pi * j / phases);
      out.push_back(std::move(psi));
    }
  }
  return out;
}

// Coordinate pattern search on the unit sphere of the -rho norm.
double refine(const PolySymbol& p0, Point& psi, std::span<const double> weights, double rho) {
  double best = std::abs(p0(psi));
  double step = 0.1;
  for (int iter = 0; iter < 400 && step > 1e-9; ++iter) {
    bool improved = false;
    for (std::size_t k = 0; k < psi.size(); ++k) {
      for (const Complex dir : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) {
        Point trial = psi;
        trial[k] += step * dir;
        normalize(trial, weights, rho);
        const double v = std::abs(p0(trial));
        if (v < best) {
          best = v;
          psi = std::move(trial);
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

PolySymbol directional_derivative(const PolySymbol& q, std::span<const Complex> eta) {
  PolySymbol out(q.num_modes());
  for (int k = 0; k < q.num_modes(); ++k) {
    out += eta[k] * q.diff_hol(k);
    out += std::conj(eta[k]) * q.diff_bar(k);
  }
  return out;
}

}  // namespace

EllipticityEstimate ellipticity_estimate(const PolySymbol& p, std::span<const double> scale_weights,
                                         double rho, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("ellipticity_estimate: samples must be >= 1");
  if (static_cast<int>(scale_weights.size()) != p.num_modes()) {
    throw std::invalid_argument("ellipticity_estimate: scale weights do not match the symbol");
  }
  const int modes = p.num_modes();
  const PolySymbol p0 = p.principal_part();

  std::vector<Point> candidates = axis_points(modes, 64);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < samples; ++i) candidates.push_back(random_point(modes, rng));

  std::vector<std::pair<double, Point>> scored;
  for (Point& psi : candidates) {
    normalize(psi, scale_weights, rho);
    scored.emplace_back(std::abs(p0(psi)), psi);
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  EllipticityEstimate est;
  est.c_est = std::numeric_limits<double>::infinity();
  const std::size_t keep = std::min<std::size_t>(8, scored.size());
  for (std::size_t i = 0; i < keep; ++i) {
    Point psi = scored[i].second;
    const double v = refine(p0, psi, scale_weights, rho);
    if (v < est.c_est) {
      est.c_est = v;
      est.argmin = psi;
    }
  }
  est.is_elliptic = est.c_est > kEllipticThreshold;
  return est;
}

HypoellipticityReport hypoellipticity_estimate(const PolySymbol& p,
                                               std::span<const double> scale_weights, double rho,
                                               int m_max, int samples, double tolerance,
                                               std::uint64_t seed) {
  if (m_max < 1) throw std::invalid_argument("hypoellipticity_estimate: m_max must be >= 1");
  if (samples < 0) throw std::invalid_argument("hypoellipticity_estimate: samples must be >= 0");
  if (static_cast<int>(scale_weights.size()) != p.num_modes()) {
    throw std::invalid_argument("hypoellipticity_estimate: scale weights do not match the symbol");
  }
  const int modes = p.num_modes();
  std::mt19937_64 rng(seed);

  // directions: every mode axis at 16 phases over a half turn, plus random ones
  std::vector<Point> directions;
  for (int k = 0; k < modes; ++k) {
    for (int j = 0; j < 16; ++j) {
      Point eta(modes, 0.0);
      eta[k] = std::polar(1.0, std::numbers::pi * j / 16);
      directions.push_back(std::move(eta));
    }
  }
  for (int i = 0; i < 16; ++i) directions.push_back(random_point(modes, rng));
  for (Point& eta : directions) normalize(eta, scale_weights, rho);

  // derivs[d][m - 1] = (d/ds)^m p(psi + s eta_d) as a polynomial in psi
  std::vector<std::vector<PolySymbol>> derivs;
  for (const Point& eta : directions) {
    std::vector<PolySymbol> chain;
    PolySymbol q = p;
    for (int m = 1; m <= m_max; ++m) {
      q = directional_derivative(q, eta);
      chain.push_back(q);
    }
    derivs.push_back(std::move(chain));
  }

  std::vector<Point> unit = axis_points(modes, 64);
  for (int i = 0; i < samples; ++i) unit.push_back(random_point(modes, rng));
  for (Point& psi : unit) normalize(psi, scale_weights, rho);

  HypoellipticityReport report;
  for (int shell = 0; shell < 8; ++shell) {
    HypoShell s;
    s.radius = std::ldexp(1.0, shell);
    s.max_ratio.assign(m_max, 0.0);
    for (const Point& u : unit) {
      Point psi = u;
      for (Complex& z : psi) z *= s.radius;
      const double value = std::abs(p(psi));
      if (value < tolerance) {
        ++s.near_zero;
        continue;
      }
      for (int m = 1; m <= m_max; ++m) {
        double dm = 0.0;
        for (const auto& chain : derivs) dm = std::max(dm, std::abs(chain[m - 1](psi)));
        const double ratio = dm * std::pow(1.0 + s.radius, m) / value;
        s.max_ratio[m - 1] = std::max(s.max_ratio[m - 1], ratio);
      }
    }
    report.any_near_zero = report.any_near_zero || s.near_zero > 0;
    report.shells.push_back(std::move(s));
  }

  // least-squares slope over the outer four shells
  const std::size_t first = report.shells.size() - 4;
  report.growth.assign(m_max, 0.0);
  for (int m = 0; m < m_max; ++m) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    bool finite = true;
    for (std::size_t i = first; i < report.shells.size(); ++i) {
      const double r = report.shells[i].max_ratio[m];
      if (!(r > 0.0)) {
        finite = false;
        break;
      }
      const double x = std::log(report.shells[i].radius), y = std::log(r);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    // a zero maximum means d^m p vanished everywhere sampled: no growth
    if (!finite) {
      bool all_zero = true;
      for (std::size_t i = first; i < report.shells.size(); ++i) {
        all_zero = all_zero && report.shells[i].max_ratio[m] == 0.0 && report.shells[i].near_zero == 0;
      }
      report.growth[m] = all_zero ? 0.0 : std::numeric_limits<double>::infinity();
      continue;
    }
    const double n = 4.0;
    report.growth[m] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  report.bounded = !report.any_near_zero;
  for (double g : report.growth) report.bounded = report.bounded && g <= kHypoGrowthLimit;
  return report;
}

}  // namespace cspath
