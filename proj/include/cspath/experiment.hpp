#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cspath/config.hpp"
#include "cspath/presets.hpp"
#include "cspath/propagator.hpp"

namespace cspath {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumeric = 2, kExitThreshold = 3 };

struct ThresholdCheck {
  std::string construction;
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct RunResult {
  std::vector<ConvergenceReport> reports;
  std::vector<ThresholdCheck> checks;
  bool passed = true;
};

/// Runs every construction of the model; no file output.
RunResult run_studies(const ExperimentConfig& config, const Model& model);

/// convergence.csv contents: construction,N,re,im,abs_error,runtime_ms.
std::string convergence_csv(const RunResult& result);
/// summary.txt contents.  Holds no timings, so it is byte-identical across runs.
std::string summary_text(const ExperimentConfig& config, const Model& model, const RunResult& result);

/// `run`: validates, computes, then writes both files into config.out_dir.
/// Nothing is written when validation or computation fails.
int run_command(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

struct InvariantResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

enum class Fault { none, moment_table };

std::vector<InvariantResult> verify_invariants(const ExperimentConfig& config, Fault fault = Fault::none);

/// `verify`: prints one line per invariant with its margin.
int verify_command(const ExperimentConfig& config, Fault fault, std::ostream& out, std::ostream& err);

}  // namespace cspath
