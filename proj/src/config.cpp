#include "cspath/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>

namespace cspath {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("key '" + key + "': '" + text + "' is not a number");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("key '" + key + "': '" + text + "' is not an integer");
  }
  return v;
}

std::vector<double> parse_doubles(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_double(key, item));
  return out;
}

PhasePoint make_point(const ExperimentConfig& c, const std::vector<double>& re,
                      const std::vector<double>& im, double default_first, const char* name) {
  const auto m = static_cast<std::size_t>(c.model.modes);
  auto fill = [&](const std::vector<double>& v, double first, const std::string& key) {
    if (v.empty()) {
      std::vector<double> d(m, 0.0);
      d[0] = first;
      return d;
    }
    if (v.size() != m) throw ConfigError("key '" + key + "' must list one value per mode");
    return v;
  };
  const auto r = fill(re, default_first, std::string(name) + "_re");
  const auto i = fill(im, 0.0, std::string(name) + "_im");
  PhasePoint p(m);
  for (std::size_t k = 0; k < m; ++k) p[k] = {r[k], i[k]};
  return p;
}

void validate_common(const ExperimentConfig& c) {
  if (c.model.modes < 1) throw ConfigError("modes must be >= 1");
  if (c.model.cutoff < 1) throw ConfigError("cutoff must be >= 1");
  if (c.t < 0.0) throw ConfigError("t must be >= 0");
  if (c.n_list.size() < 4) throw ConfigError("n_list needs at least 4 entries");
  for (std::size_t i = 0; i < c.n_list.size(); ++i) {
    if (c.n_list[i] < 1) throw ConfigError("n_list entries must be >= 1");
    if (i > 0 && c.n_list[i] <= c.n_list[i - 1]) throw ConfigError("n_list must be strictly increasing");
  }
  if (c.radial_order < 1 || c.angular_order < 1) throw ConfigError("quadrature orders must be >= 1");
  if (!c.symbol_file.empty() && !std::filesystem::is_regular_file(c.symbol_file)) {
    throw ConfigError("symbol_file '" + c.symbol_file + "' does not exist");
  }
  build_model(c);
  psi_in(c);
  psi_out(c);
}

}  // namespace

void set_config_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "preset") c.preset = value;
  else if (key == "symbol_file") c.symbol_file = value;
  else if (key == "modes") c.model.modes = parse_int(key, value);
  else if (key == "cutoff") c.model.cutoff = parse_int(key, value);
  else if (key == "frequencies") c.model.frequencies = parse_doubles(key, value);
  else if (key == "scale_weights") c.model.scale_weights = parse_doubles(key, value);
  else if (key == "coupling") c.model.coupling = parse_double(key, value);
  else if (key == "rho") c.model.rho = parse_double(key, value);
  else if (key == "t") c.t = parse_double(key, value);
  else if (key == "n_list") {
    c.n_list.clear();
    for (const auto& item : split_list(value)) c.n_list.push_back(parse_int(key, item));
  }
  else if (key == "psi_in_re") c.psi_in_re = parse_doubles(key, value);
  else if (key == "psi_in_im") c.psi_in_im = parse_doubles(key, value);
  else if (key == "psi_out_re") c.psi_out_re = parse_doubles(key, value);
  else if (key == "psi_out_im") c.psi_out_im = parse_doubles(key, value);
  else if (key == "radial_order") c.radial_order = parse_int(key, value);
  else if (key == "angular_order") c.angular_order = parse_int(key, value);
  else if (key == "out_dir") c.out_dir = value;
  else if (key == "constructions") {
    c.constructions.clear();
    try {
      for (const auto& item : split_list(value)) c.constructions.push_back(construction_from_string(item));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  else if (key == "min_order") c.thresholds.min_order = parse_double(key, value);
  else if (key == "max_order") c.thresholds.max_order = parse_double(key, value);
  else if (key == "max_final_abs_error") c.thresholds.max_final_abs_error = parse_double(key, value);
  else if (key == "max_final_rel_error") c.thresholds.max_final_rel_error = parse_double(key, value);
  else throw ConfigError("unknown key '" + key + "'");
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  set_config_key(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void read_config(std::istream& is, ExperimentConfig& config, const std::string& source) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      set_config_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  ExperimentConfig config;
  read_config(in, config, path);
  // relative symbol paths are resolved against the config's directory
  if (!config.symbol_file.empty() && std::filesystem::path(config.symbol_file).is_relative()) {
    config.symbol_file = (std::filesystem::path(path).parent_path() / config.symbol_file).string();
  }
  return config;
}

PhasePoint psi_in(const ExperimentConfig& c) {
  return make_point(c, c.psi_in_re, c.psi_in_im, 0.6, "psi_in");
}

PhasePoint psi_out(const ExperimentConfig& c) {
  return make_point(c, c.psi_out_re, c.psi_out_im, 0.4, "psi_out");
}

Model build_model(const ExperimentConfig& c) {
  try {
    if (!c.symbol_file.empty()) return make_custom_model(read_symbol_file(c.symbol_file), c.model);
    return make_preset(c.preset, c.model);
  } catch (const SymbolFormatError& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void validate_for_verify(const ExperimentConfig& config) { validate_common(config); }

void validate_for_run(const ExperimentConfig& config) {
  validate_common(config);
  const ModeSpace space = make_space(config.model);
  for (const auto& [name, p] : {std::pair{"psi_in", psi_in(config)}, std::pair{"psi_out", psi_out(config)}}) {
    const double tail = tail_bound(space, p);
    if (!(tail <= kMaxBoundaryTail)) {
      std::ostringstream msg;
      msg << name << " leaks past the cutoff: tail_bound = " << tail << " > " << kMaxBoundaryTail
          << " (raise cutoff or shrink the boundary point)";
      throw ConfigError(msg.str());
    }
  }
}

}  // namespace cspath
