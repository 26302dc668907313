#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cspath/mode_space.hpp"
#include "cspath/poly_symbol.hpp"
#include "cspath/propagator.hpp"

namespace cspath {

/// Shape and coupling parameters shared by every preset.  Empty frequency or
/// scale-weight lists mean "all ones".
struct ModelParams {
  int modes = 1;
  int cutoff = 24;
  std::vector<double> frequencies;
  std::vector<double> scale_weights;
  double coupling = 0.2;
  double rho = 0.5;
};

/// Pass/fail bounds for a convergence study; unset bounds are not checked.
struct Thresholds {
  std::optional<double> min_order = std::nullopt;
  std::optional<double> max_order = std::nullopt;
  std::optional<double> max_final_abs_error = std::nullopt;
  std::optional<double> max_final_rel_error = std::nullopt;
};

struct Model {
  std::string name;
  ModeSpace space;
  /// Wick symbol handed to the constructions (for Theorem 2, the part added to H0).
  PolySymbol symbol;
  std::vector<Construction> constructions;
  Thresholds thresholds;
  std::string description;
};

/// harmonic: P = sum omega_k |psi_k|^2 (Theorem 1)
/// kerr:     P = sum omega_k |psi_k|^2 + g sum |psi_k|^4 (Theorem 1)
/// phi4:     H = H0 + g sum :phi_k^4:, split as H0' + P with
///           P = (1/2) sum lambda_k^{-4 rho} |psi_k|^2 + g sum phi_k^4 and
///           H0' frequencies omega_k - (1/2) lambda_k^{-4 rho} (Theorem 2)
/// free:     P = 0 (Theorem 2, closed-form oracle)
/// Throws std::invalid_argument for unknown names or invalid parameters.
Model make_preset(const std::string& name, const ModelParams& params);

/// A user-supplied Wick symbol, evolved with Theorem 1 by default.
Model make_custom_model(PolySymbol symbol, const ModelParams& params);

std::vector<std::string> preset_names();

/// ModeSpace built from params (unit defaults filled in).
ModeSpace make_space(const ModelParams& params);

}  // namespace cspath
