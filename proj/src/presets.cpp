#include "cspath/presets.hpp"

#include <cmath>
#include <stdexcept>

#include "cspath/symbols.hpp"

namespace cspath {

namespace {

std::vector<double> filled(const std::vector<double>& v, int modes, const char* what) {
  if (v.empty()) return std::vector<double>(modes, 1.0);
  if (static_cast<int>(v.size()) != modes) {
    throw std::invalid_argument(std::string(what) + " must list one value per mode");
  }
  return v;
}

PolySymbol quartic(int modes, double g) {
  PolySymbol p(modes);
  for (int k = 0; k < modes; ++k) {
    FockIndex e(modes, 0);
    e[k] = 2;
    p.add(e, e, g);
  }
  return p;
}

}  // namespace

ModeSpace make_space(const ModelParams& params) {
  return ModeSpace(params.modes, params.cutoff,
                   filled(params.frequencies, params.modes, "frequencies"),
                   filled(params.scale_weights, params.modes, "scale_weights"));
}

std::vector<std::string> preset_names() { return {"harmonic", "kerr", "phi4", "free"}; }

Model make_preset(const std::string& name, const ModelParams& params) {
  const ModeSpace space = make_space(params);
  const int m = space.num_modes();
  if (name == "harmonic") {
    return {name, space, PolySymbol::number(space.frequencies()), {Construction::theorem1},
            {.min_order = 0.8, .max_order = 1.5},
            "P^w = sum omega_k |psi_k|^2"};
  }
  if (name == "kerr") {
    return {name, space, PolySymbol::number(space.frequencies()) + quartic(m, params.coupling),
            {Construction::theorem1},
            {.min_order = 0.8, .max_order = 1.5},
            "P^w = sum omega_k |psi_k|^2 + g sum |psi_k|^4"};
  }
  if (name == "phi4") {
    if (params.rho < 0.0) throw std::invalid_argument("phi4 preset: rho must be >= 0");
    std::vector<double> reg(m), shifted(m);
    for (int k = 0; k < m; ++k) {
      reg[k] = 0.5 * std::pow(space.scale_weights()[k], -4.0 * params.rho);
      shifted[k] = space.frequencies()[k] - reg[k];
      if (!(shifted[k] > 0.0)) {
        throw std::invalid_argument(
            "phi4 preset: omega_k must exceed (1/2) lambda_k^{-4 rho} so H0 - (1/2) H_{2 rho} stays positive");
      }
    }
    const std::vector<double> phi4_coeffs{0.0, 0.0, 0.0, 0.0, params.coupling};
    return {name, space.with_frequencies(shifted),
            PolySymbol::number(reg) + phi_polynomial(phi4_coeffs, space),
            {Construction::theorem2},
            {.max_final_rel_error = 1e-3},
            "H = H0 + g sum :phi_k^4:, regularized by (1/2) H_{2 rho}"};
  }
  if (name == "free") {
    return {name, space, PolySymbol(m), {Construction::theorem2},
            {.max_final_abs_error = 1e-6},
            "P = 0, free evolution"};
  }
  throw std::invalid_argument("unknown preset '" + name + "' (harmonic, kerr, phi4, free)");
}

Model make_custom_model(PolySymbol symbol, const ModelParams& params) {
  const ModeSpace space = make_space(params);
  if (symbol.num_modes() != space.num_modes()) {
    throw std::invalid_argument("symbol file declares " + std::to_string(symbol.num_modes()) +
                                " modes but the config has " + std::to_string(space.num_modes()));
  }
  return {"custom", space, std::move(symbol), {Construction::theorem1}, {}, "symbol from file"};
}

}  // namespace cspath
