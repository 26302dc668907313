// cspath run|verify [config] [--preset NAME] [--out DIR] [--override key=value ...]

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cspath/config.hpp"
#include "cspath/experiment.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::string fault;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("config", opt.config_path, "key = value config file (optional with --preset)");
  cmd->add_option("--preset", opt.preset, "harmonic, kerr, phi4 or free");
  cmd->add_option("--override", opt.overrides, "key=value, applied after the config file")
      ->allow_extra_args(false);
}

cspath::ExperimentConfig assemble(const Options& opt) {
  cspath::ExperimentConfig config;
  if (!opt.config_path.empty()) config = cspath::load_config_file(opt.config_path);
  if (!opt.preset.empty()) config.preset = opt.preset;
  if (!opt.out_dir.empty()) config.out_dir = opt.out_dir;
  for (const auto& o : opt.overrides) cspath::apply_override(config, o);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent-state sliced propagators on truncated Fock spaces"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* run = app.add_subcommand("run", "convergence study; writes convergence.csv and summary.txt");
  add_common(run, opt);
  run->add_option("--out", opt.out_dir, "output directory (overrides out_dir)");

  CLI::App* verify = app.add_subcommand("verify", "invariant suite with measured margins");
  add_common(verify, opt);
  verify->add_option("--inject-fault", opt.fault, "test hook: moment-table")
      ->check(CLI::IsMember({"moment-table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cspath::kExitConfig;
  }

  cspath::ExperimentConfig config;
  try {
    if (opt.config_path.empty() && opt.preset.empty()) {
      throw cspath::ConfigError("give a config file or --preset");
    }
    config = assemble(opt);
  } catch (const cspath::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cspath::kExitConfig;
  }

  if (run->parsed()) return cspath::run_command(config, std::cout, std::cerr);
  const auto fault = opt.fault == "moment-table" ? cspath::Fault::moment_table : cspath::Fault::none;
  return cspath::verify_command(config, fault, std::cout, std::cerr);
}
