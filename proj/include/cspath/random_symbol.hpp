#pragma once

#include <random>

#include "cspath/poly_symbol.hpp"

namespace cspath {

/// Dense random polynomial of total degree <= degree, coefficients uniform in
/// the unit square.  With real = true the coefficients are paired so that the
/// symbol is real-valued.
PolySymbol random_symbol(int modes, int degree, std::mt19937_64& rng, bool real);

}  // namespace cspath
