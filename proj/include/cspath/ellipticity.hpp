#pragma once
// Sampling estimators for the ellipticity and hypoellipticity inequalities.
// They are heuristics: a minimum over finitely many points can only
// overestimate the true infimum.

#include <cstdint>
#include <span>
#include <vector>

#include "cspath/poly_symbol.hpp"

namespace cspath {

/// ||psi||_{-rho}^2 = sum_k lambda_k^{-2 rho} |psi_k|^2.
double scale_norm(std::span<const Complex> psi, std::span<const double> scale_weights, double rho);

struct EllipticityEstimate {
  /// Smallest observed |P0(psi)| / ||psi||_{-rho}^n, n = degree of P0.
  double c_est = 0.0;
  bool is_elliptic = false;
  /// Direction attaining c_est, normalized to ||psi||_{-rho} = 1.
  std::vector<Complex> argmin;
};

/// Below this c_est the symbol is reported as not elliptic.
inline constexpr double kEllipticThreshold = 1e-6;

EllipticityEstimate ellipticity_estimate(const PolySymbol& p, std::span<const double> scale_weights,
                                         double rho, int samples, std::uint64_t seed = 12345);

struct HypoShell {
  double radius = 0.0;           // ||psi||_{-rho} on the shell
  std::vector<double> max_ratio; // index m - 1, over samples with |p| >= tolerance
  int near_zero = 0;             // samples with |p| < tolerance
};

struct HypoellipticityReport {
  std::vector<HypoShell> shells;
  /// log-log slope of the per-shell max ratio over the outer shells, per m.
  std::vector<double> growth;
  bool any_near_zero = false;
  bool bounded = false;
};

/// Ratio |||d^m p(psi)|||_{-rho} (1 + ||psi||_{-rho})^m / |p(psi)| on shells
/// ||psi||_{-rho} = 2^k, k = 0..7.  |||d^m p||| is the largest |(d/ds)^m p(psi + s eta)|
/// over sampled unit directions eta.  `bounded` means no near-zero samples and
/// a growth slope <= kHypoGrowthLimit for every m.
inline constexpr double kHypoGrowthLimit = 0.2;

HypoellipticityReport hypoellipticity_estimate(const PolySymbol& p,
                                               std::span<const double> scale_weights, double rho,
                                               int m_max, int samples, double tolerance = 1e-9,
                                               std::uint64_t seed = 12345);

}  // namespace cspath
