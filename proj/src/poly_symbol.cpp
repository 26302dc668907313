#include "cspath/poly_symbol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cspath {

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// k! / prod_i m_i!
double multinomial(const FockIndex& m) {
  double r = factorial(total_occupation(m));
  for (int v : m) r /= factorial(v);
  return r;
}

FockIndex counts(int modes, std::span<const int> slots) {
  FockIndex m(modes, 0);
  for (int i : slots) {
    if (i < 0 || i >= modes) {
      throw std::invalid_argument("PolySymbol: tensor index " + std::to_string(i) +
                                  " outside [0, " + std::to_string(modes) + ")");
    }
    ++m[i];
  }
  return m;
}

Complex ipow(Complex z, int n) {
  Complex r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

}  // namespace

PolySymbol::PolySymbol(int num_modes) : num_modes_(num_modes) {
  if (num_modes_ < 1) throw std::invalid_argument("PolySymbol: num_modes must be >= 1");
}

PolySymbol PolySymbol::constant(int num_modes, Complex value) {
  PolySymbol p(num_modes);
  p.add(FockIndex(num_modes, 0), FockIndex(num_modes, 0), value);
  return p;
}

PolySymbol PolySymbol::monomial(int num_modes, FockIndex bar, FockIndex hol, Complex coeff) {
  PolySymbol p(num_modes);
  p.add(bar, hol, coeff);
  return p;
}

PolySymbol PolySymbol::number(std::span<const double> weights) {
  const int modes = static_cast<int>(weights.size());
  PolySymbol p(modes);
  for (int k = 0; k < modes; ++k) {
    FockIndex e(modes, 0);
    e[k] = 1;
    p.add(e, e, weights[k]);
  }
  return p;
}

void PolySymbol::require_modes(const FockIndex& idx) const {
  if (static_cast<int>(idx.size()) != num_modes_) {
    throw std::invalid_argument("PolySymbol: exponent vector has " + std::to_string(idx.size()) +
                                " entries, expected " + std::to_string(num_modes_));
  }
  for (int v : idx) {
    if (v < 0) throw std::invalid_argument("PolySymbol: negative exponent");
  }
}

int PolySymbol::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

void PolySymbol::add(const FockIndex& bar, const FockIndex& hol, Complex coeff) {
  require_modes(bar);
  require_modes(hol);
  if (coeff == Complex(0.0)) return;
  auto [it, inserted] = terms_.try_emplace(Monomial{bar, hol}, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == Complex(0.0)) terms_.erase(it);
  }
}

Complex PolySymbol::coefficient(const FockIndex& bar, const FockIndex& hol) const {
  auto it = terms_.find(Monomial{bar, hol});
  return it == terms_.end() ? Complex(0.0) : it->second;
}

void PolySymbol::add_tensor_entry(std::span<const int> creation,
                                  std::span<const int> annihilation, Complex value) {
  add(counts(num_modes_, creation), counts(num_modes_, annihilation), value);
}

Complex PolySymbol::tensor_entry(std::span<const int> creation,
                                 std::span<const int> annihilation) const {
  const FockIndex bar = counts(num_modes_, creation);
  const FockIndex hol = counts(num_modes_, annihilation);
  return coefficient(bar, hol) / (multinomial(bar) * multinomial(hol));
}

Complex PolySymbol::operator()(std::span<const Complex> psi) const {
  if (static_cast<int>(psi.size()) != num_modes_) {
    throw std::invalid_argument("PolySymbol: evaluation point has wrong number of modes");
  }
  Complex sum = 0.0;
  for (const auto& [m, c] : terms_) {
    Complex v = c;
    for (int k = 0; k < num_modes_; ++k) {
      v *= ipow(std::conj(psi[k]), m.bar[k]) * ipow(psi[k], m.hol[k]);
    }
    sum += v;
  }
  return sum;
}

PolySymbol PolySymbol::conjugate() const {
  PolySymbol r(num_modes_);
  for (const auto& [m, c] : terms_) r.add(m.hol, m.bar, std::conj(c));
  return r;
}

bool PolySymbol::is_real(double tol) const {
  return max_coeff_distance(conjugate()) <= tol;
}

PolySymbol PolySymbol::principal_part() const {
  const int d = degree();
  PolySymbol r(num_modes_);
  for (const auto& [m, c] : terms_) {
    if (m.degree() == d) r.add(m.bar, m.hol, c);
  }
  return r;
}

PolySymbol PolySymbol::truncated(int max_degree) const {
  PolySymbol r(num_modes_);
  for (const auto& [m, c] : terms_) {
    if (m.degree() <= max_degree) r.add(m.bar, m.hol, c);
  }
  return r;
}

PolySymbol PolySymbol::diff_bar(int k) const {
  PolySymbol r(num_modes_);
  for (const auto& [m, c] : terms_) {
    if (m.bar[k] == 0) continue;
    FockIndex bar = m.bar;
    --bar[k];
    r.add(bar, m.hol, c * static_cast<double>(m.bar[k]));
  }
  return r;
}

PolySymbol PolySymbol::diff_hol(int k) const {
  PolySymbol r(num_modes_);
  for (const auto& [m, c] : terms_) {
    if (m.hol[k] == 0) continue;
    FockIndex hol = m.hol;
    --hol[k];
    r.add(m.bar, hol, c * static_cast<double>(m.hol[k]));
  }
  return r;
}

PolySymbol PolySymbol::pruned(double tol) const {
  PolySymbol r(num_modes_);
  for (const auto& [m, c] : terms_) {
    if (std::abs(c) > tol) r.add(m.bar, m.hol, c);
  }
  return r;
}

double PolySymbol::max_coeff_distance(const PolySymbol& other) const {
  double d = 0.0;
  for (const auto& [m, c] : terms_) d = std::max(d, std::abs(c - other.coefficient(m.bar, m.hol)));
  for (const auto& [m, c] : other.terms_) {
    if (!terms_.contains(m)) d = std::max(d, std::abs(c));
  }
  return d;
}

PolySymbol& PolySymbol::operator+=(const PolySymbol& other) {
  if (other.num_modes_ != num_modes_) throw std::invalid_argument("PolySymbol: mode mismatch");
  for (const auto& [m, c] : other.terms_) add(m.bar, m.hol, c);
  return *this;
}

PolySymbol& PolySymbol::operator-=(const PolySymbol& other) {
  if (other.num_modes_ != num_modes_) throw std::invalid_argument("PolySymbol: mode mismatch");
  for (const auto& [m, c] : other.terms_) add(m.bar, m.hol, -c);
  return *this;
}

PolySymbol& PolySymbol::operator*=(Complex s) {
  if (s == Complex(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

PolySymbol operator*(const PolySymbol& a, const PolySymbol& b) {
  if (a.num_modes_ != b.num_modes_) throw std::invalid_argument("PolySymbol: mode mismatch");
  PolySymbol r(a.num_modes_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      FockIndex bar = ma.bar, hol = ma.hol;
      for (int k = 0; k < a.num_modes_; ++k) {
        bar[k] += mb.bar[k];
        hol[k] += mb.hol[k];
      }
      r.add(bar, hol, ca * cb);
    }
  }
  return r;
}

}  // namespace cspath
