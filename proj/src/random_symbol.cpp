#include "cspath/random_symbol.hpp"

namespace cspath {

namespace {

void for_each_exponent(int modes, int max_total, const auto& f) {
  FockIndex e(modes, 0);
  auto rec = [&](auto&& self, int k, int left) -> void {
    if (k == modes) {
      f(static_cast<const FockIndex&>(e));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      e[k] = v;
      self(self, k + 1, left - v);
    }
    e[k] = 0;
  };
  rec(rec, 0, max_total);
}

}  // namespace

PolySymbol random_symbol(int modes, int degree, std::mt19937_64& rng, bool real) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PolySymbol p(modes);
  for_each_exponent(modes, degree, [&](const FockIndex& bar) {
    const int left = degree - total_occupation(bar);
    for_each_exponent(modes, left, [&](const FockIndex& hol) {
      if (real && hol < bar) return;  // filled in with its partner
      Complex c{u(rng), u(rng)};
      if (real && hol == bar) c = c.real();
      p.add(bar, hol, c);
      if (real && hol != bar) p.add(hol, bar, std::conj(c));
    });
  });
  return p;
}

}  // namespace cspath
