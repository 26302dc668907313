#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cspath/fock.hpp"
#include "cspath/presets.hpp"
#include "cspath/propagator.hpp"

namespace cspath {

/// Invalid or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Experiment description.  Config files hold one `key = value` per line;
/// '#' starts a comment; lists are comma-separated.  Keys:
///
///   preset          harmonic | kerr | phi4 | free (ignored when symbol_file is set)
///   symbol_file     Wick symbol in the text format of write_symbol
///   modes, cutoff   M and D
///   frequencies     omega_k per mode
///   scale_weights   lambda_k per mode
///   coupling, rho   preset parameters g and rho
///   t               total time
///   n_list          slice counts, strictly increasing, at least 4
///   psi_in_re, psi_in_im, psi_out_re, psi_out_im   boundary points per mode
///   radial_order, angular_order                    quadrature orders
///   out_dir         output directory for `run`
///   constructions   theorem1, theorem2, resolvent (default: the preset's)
///   min_order, max_order, max_final_abs_error, max_final_rel_error   thresholds
struct ExperimentConfig {
  std::string preset = "kerr";
  std::string symbol_file;
  ModelParams model;
  double t = 0.5;
  std::vector<int> n_list{8, 16, 32, 64, 128};
  std::vector<double> psi_in_re, psi_in_im, psi_out_re, psi_out_im;
  int radial_order = 64;
  int angular_order = 128;
  std::string out_dir = "out";
  std::vector<Construction> constructions;
  Thresholds thresholds;
};

/// Sets one key; throws ConfigError on unknown keys or malformed values.
void set_config_key(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Applies "key=value".
void apply_override(ExperimentConfig& config, const std::string& assignment);

/// Reads key = value lines on top of `config`.  `source` names the input in errors.
void read_config(std::istream& is, ExperimentConfig& config, const std::string& source = "config");
ExperimentConfig load_config_file(const std::string& path);

/// Boundary points with defaults filled in: psi' = 0.6 and psi'' = 0.4 on mode 0.
PhasePoint psi_in(const ExperimentConfig& config);
PhasePoint psi_out(const ExperimentConfig& config);

/// Builds the model (preset or symbol file).  Throws ConfigError.
Model build_model(const ExperimentConfig& config);

/// Checks everything `run` needs, including the tail invariant
/// tail_bound(psi) <= kMaxBoundaryTail for both boundary points.
inline constexpr double kMaxBoundaryTail = 1e-12;
void validate_for_run(const ExperimentConfig& config);
/// Same checks without the tail invariant (verify reports it instead).
void validate_for_verify(const ExperimentConfig& config);

}  // namespace cspath
