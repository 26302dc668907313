#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "cspath/random_symbol.hpp"
#include "cspath/symbols.hpp"

using namespace cspath;
using namespace std::complex_literals;

namespace {

PolySymbol mono(int modes, FockIndex bar, FockIndex hol, Complex c = 1.0) {
  return PolySymbol::monomial(modes, std::move(bar), std::move(hol), c);
}

PolySymbol number_symbol(int modes) { return PolySymbol::number(std::vector<double>(modes, 1.0)); }

// sum c * prod C^bar prod A^hol with explicit ladder matrices
CMatrix ladder_product(const PolySymbol& p, const ModeSpace& s) {
  const LadderOperators op = ladder_operators(s);
  const auto dim = static_cast<Eigen::Index>(s.dim());
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& [m, c] : p.terms()) {
    CMatrix t = CMatrix::Identity(dim, dim);
    for (int k = 0; k < s.num_modes(); ++k)
      for (int i = 0; i < m.bar[k]; ++i) t = t * op.creation[k].matrix;
    for (int k = 0; k < s.num_modes(); ++k)
      for (int i = 0; i < m.hol[k]; ++i) t = t * op.annihilation[k].matrix;
    out += c * t;
  }
  return out;
}

PhasePoint random_point(int modes, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PhasePoint p(modes);
  double n = 0.0;
  for (auto& z : p) {
    z = {u(rng), u(rng)};
    n += std::norm(z);
  }
  for (auto& z : p) z *= radius * std::uniform_real_distribution<double>(0.0, 1.0)(rng) / std::sqrt(n);
  return p;
}

CMatrix diag(std::initializer_list<double> d) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

}  // namespace

TEST_CASE("wick quantization examples") {
  const ModeSpace s(1, 4);
  CHECK(max_abs_entry(wick_quantize(number_symbol(1), s).matrix - diag({0, 1, 2, 3, 4})) < 1e-15);
  CHECK(max_abs_entry(wick_quantize(PolySymbol::constant(1, 2.5 - 1.0i), s).matrix -
                      (2.5 - 1.0i) * CMatrix::Identity(5, 5)) == 0.0);

  PolySymbol c20(1);
  c20.add_tensor_entry(std::vector<int>{0, 0}, std::vector<int>{}, 1.0);
  const ModeSpace s2(1, 2);
  const CMatrix w = wick_quantize(c20, s2).matrix;
  const CMatrix c = ladder_operators(s2).creation[0].matrix;
  CHECK(max_abs_entry(w - c * c) < 1e-15);
  CHECK(std::abs(w(2, 0) - std::sqrt(2.0)) < 1e-15);
  CHECK_THROWS_AS(wick_quantize(number_symbol(2), s), std::invalid_argument);
}

TEST_CASE("wick quantization equals the normal-ordered ladder product") {
  std::mt19937_64 rng(1);
  for (int modes : {1, 2, 3}) {
    const ModeSpace s(modes, 5);
    for (int i = 0; i < 4; ++i) {
      const PolySymbol p = random_symbol(modes, 4, rng, false);
      CHECK(max_abs_entry(wick_quantize(p, s).matrix - ladder_product(p, s)) < 1e-12);
    }
  }
}

TEST_CASE("wick symbol of operators") {
  std::mt19937_64 rng(2);
  const ModeSpace s(2, 30);
  const SymbolFn one = wick_symbol_of(identity_operator(s));
  const SymbolFn h0 = wick_symbol_of(free_hamiltonian(s));
  for (int i = 0; i < 10; ++i) {
    const PhasePoint psi = random_point(2, 1.0, rng);
    CHECK(std::abs(one(psi) - 1.0) < 1e-12);
    CHECK(std::abs(h0(psi) - (std::norm(psi[0]) + std::norm(psi[1]))) < 1e-12);
  }
  for (int j = 0; j < 3; ++j) {
    const PolySymbol p = random_symbol(2, 4, rng, j == 0);
    const SymbolFn w = wick_symbol_of(wick_quantize(p, s));
    for (int i = 0; i < 20; ++i) {
      const PhasePoint psi = random_point(2, 1.0, rng);
      CHECK(std::abs(w(psi) - p(psi)) < 1e-10);
    }
  }
}

TEST_CASE("berezin from wick") {
  CHECK(berezin_from_wick(PolySymbol::constant(1, 3.0)).max_coeff_distance(PolySymbol::constant(1, 3.0)) == 0.0);

  PolySymbol expected = number_symbol(1);
  expected += PolySymbol::constant(1, -1.0);
  const PolySymbol b = berezin_from_wick(number_symbol(1));
  CHECK(b.max_coeff_distance(expected) < 1e-15);
  const ModeSpace s(1, 6);
  CHECK(max_abs_entry(toeplitz_quantize_poly(b, s).matrix - diag({0, 1, 2, 3, 4, 5, 6})) < 1e-13);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 5; ++i) {
    const PolySymbol p = random_symbol(2, 5, rng, false);
    CHECK(berezin_from_wick(p).principal_part().max_coeff_distance(p.principal_part()) < 1e-14);
  }
}

TEST_CASE("wick from berezin") {
  CHECK(wick_from_berezin(PolySymbol::constant(2, 1.5i)).max_coeff_distance(PolySymbol::constant(2, 1.5i)) == 0.0);
  PolySymbol shifted = number_symbol(1);
  shifted += PolySymbol::constant(1, -1.0);
  CHECK(wick_from_berezin(shifted).max_coeff_distance(number_symbol(1)) < 1e-15);

  std::mt19937_64 rng(4);
  for (int modes : {1, 2}) {
    for (int i = 0; i < 5; ++i) {
      const PolySymbol p = random_symbol(modes, 4, rng, false);
      CHECK(wick_from_berezin(berezin_from_wick(p)).max_coeff_distance(p) < 1e-12);
      CHECK(berezin_from_wick(wick_from_berezin(p)).max_coeff_distance(p) < 1e-12);
    }
  }
}

TEST_CASE("toeplitz quantization of polynomials") {
  const ModeSpace s(1, 5);
  CHECK(max_abs_entry(toeplitz_quantize_poly(PolySymbol::constant(1, 1.0), s).matrix - CMatrix::Identity(6, 6)) < 1e-15);
  CHECK(max_abs_entry(toeplitz_quantize_poly(number_symbol(1), s).matrix - diag({1, 2, 3, 4, 5, 6})) < 1e-14);

  std::mt19937_64 rng(5);
  const ModeSpace s2(2, 4);
  for (int i = 0; i < 5; ++i) {
    const PolySymbol p = random_symbol(2, 4, rng, false);
    const CMatrix t = toeplitz_quantize_poly(p, s2).matrix;
    CHECK(max_abs_entry(toeplitz_quantize_poly(p.conjugate(), s2).matrix - t.adjoint()) < 1e-13);
  }

  // independent route: numeric quadrature exact to the needed degree
  const ModeSpace s1(1, 6);
  const PhaseSpaceQuadrature q = build_rule(1, 12, 24);
  for (int i = 0; i < 5; ++i) {
    const PolySymbol p = random_symbol(1, 5, rng, false);
    const CMatrix exact = toeplitz_quantize_poly(p, s1).matrix;
    const CMatrix numeric = toeplitz_quantize_fn(as_function(p), s1, q, {.refine = false}).op.matrix;
    CHECK(max_abs_entry(exact - numeric) < 1e-10);
  }
}

TEST_CASE("conversion consistency on random symbols") {
  std::mt19937_64 rng(6);
  for (int modes : {1, 2}) {
    const ModeSpace s(modes, modes == 1 ? 12 : 8);
    for (int i = 0; i < 6; ++i) {
      const PolySymbol p = random_symbol(modes, 6, rng, i % 2 == 0);
      CHECK(max_abs_entry(toeplitz_quantize_poly(berezin_from_wick(p), s).matrix - wick_quantize(p, s).matrix) < 1e-10);
    }
  }
}

TEST_CASE("berezin symbol extraction") {
  const ModeSpace s(1, 10);
  const BerezinFit one = berezin_symbol_of(identity_operator(s), 0);
  CHECK(one.symbol.max_coeff_distance(PolySymbol::constant(1, 1.0)) < 1e-12);

  PolySymbol expected = number_symbol(1);
  expected += PolySymbol::constant(1, -1.0);
  CHECK(berezin_symbol_of(free_hamiltonian(s), 2).symbol.max_coeff_distance(expected) < 1e-12);

  std::mt19937_64 rng(8);
  for (int modes : {1, 2}) {
    const ModeSpace sm(modes, modes == 1 ? 12 : 9);
    for (int i = 0; i < 3; ++i) {
      const PolySymbol p = random_symbol(modes, 4, rng, false);
      const BerezinFit fit = berezin_symbol_of(toeplitz_quantize_poly(p, sm), 4);
      CHECK(fit.residual <= 1e-10);
      CHECK(fit.symbol.max_coeff_distance(p) < 1e-9);
    }
  }

  // the number operator has no constant Berezin symbol
  try {
    berezin_symbol_of(free_hamiltonian(s), 0);
    FAIL("expected NoSymbolError");
  } catch (const NoSymbolError& e) {
    CHECK(e.residual() > 1.0);
  }
  CHECK_THROWS_AS(berezin_symbol_of(free_hamiltonian(ModeSpace(1, 3)), 4), std::invalid_argument);
}

TEST_CASE("composition expansion") {
  std::mt19937_64 rng(9);
  const PolySymbol q2 = random_symbol(1, 3, rng, false);
  const PolySymbol c = PolySymbol::constant(1, 0.5 - 2.0i);
  for (int order = 0; order <= 3; ++order) {
    CHECK(compose_expansion(q2, c, order).max_coeff_distance((0.5 - 2.0i) * q2) < 1e-14);
  }
  const PolySymbol q1 = random_symbol(1, 3, rng, false);
  CHECK(compose_expansion(q2, q1, 0).max_coeff_distance(q2 * q1) < 1e-14);

  // N^2 from the Berezin symbol of N
  PolySymbol n_b = number_symbol(1);
  n_b += PolySymbol::constant(1, -1.0);
  const ModeSpace s(1, 16);
  const FockOperator n_op = free_hamiltonian(s);
  const PolySymbol oracle = berezin_symbol_of(n_op * n_op, 4).symbol;
  CHECK(compose_expansion(n_b, n_b, 4).max_coeff_distance(oracle) < 1e-10);
  PolySymbol closed = mono(1, {2}, {2});
  closed += -3.0 * number_symbol(1);
  closed += PolySymbol::constant(1, 1.0);
  CHECK(oracle.max_coeff_distance(closed) < 1e-10);

  // random pairs with total degree <= 4 against the exact product
  for (int modes : {1, 2}) {
    const ModeSpace sm(modes, modes == 1 ? 16 : 10);
    for (int i = 0; i < 4; ++i) {
      const int d2 = 1 + i % 3, d1 = 4 - d2;
      const PolySymbol a = random_symbol(modes, d2, rng, false), b = random_symbol(modes, d1, rng, false);
      const FockOperator prod = toeplitz_quantize_poly(a, sm) * toeplitz_quantize_poly(b, sm);
      const PolySymbol exact = berezin_symbol_of(prod, 4).symbol;
      CHECK(compose_expansion(a, b, 4).max_coeff_distance(exact) < 1e-10);
    }
  }
}

TEST_CASE("self-adjoint exactly when the symbol is real") {
  std::mt19937_64 rng(10);
  const ModeSpace s(2, 6);
  for (int i = 0; i < 20; ++i) {
    const bool real = i % 2 == 0;
    const PolySymbol p = random_symbol(2, 4, rng, real);
    CHECK(p.is_real() == real);
    const CMatrix w = wick_quantize(p, s).matrix;
    CHECK((max_abs_entry(w - w.adjoint()) < 1e-12) == real);
  }
}

TEST_CASE("Toeplitz norm is majorized by the symbol supremum") {
  std::mt19937_64 rng(11);
  const ModeSpace s(1, 12);
  const PhaseSpaceQuadrature q = build_rule(1, 48, 64);
  for (int i = 0; i < 10; ++i) {
    auto p = std::make_shared<const PolySymbol>(random_symbol(1, 2, rng, true));
    const double tau = 0.1 * (i + 1);
    const SymbolFn f = [p, tau](std::span<const Complex> z) { return 1.0 / Complex(1.0, (*p)(z).real() * tau); };
    const ToeplitzResult t = toeplitz_quantize_fn(f, s, q, {.refine = false});
    double sup = 0.0;
    for (std::size_t n = 0; n < q.size(); ++n) sup = std::max(sup, std::abs(f(q.node(n))));
    CHECK(spectral_norm(t.op.matrix) <= sup + 1e-8);
  }
}

TEST_CASE("spectral bounds of Wick operators") {
  std::mt19937_64 rng(12);
  // (|psi|^2 - a)^2: lambda_min(W) >= inf of its Berezin symbol, -2 - 2a
  for (double a : {0.5, 1.0, 2.0}) {
    PolySymbol p = number_symbol(1) * number_symbol(1);
    p += -2.0 * a * number_symbol(1);
    p += PolySymbol::constant(1, a * a);
    const ModeSpace s(1, 30);
    const CMatrix w = wick_quantize(p, s).matrix;
    const Eigen::Index block = static_cast<Eigen::Index>(s.block_size(26));
    const double lmin = Eigen::SelfAdjointEigenSolver<CMatrix>(w.topLeftCorner(block, block)).eigenvalues().minCoeff();
    CHECK(lmin >= -2.0 - 2.0 * a - 1e-9);
    // the coherent expectation bounds it from above: lambda_min <= p(psi)
    for (int i = 0; i < 20; ++i) {
      const PhasePoint psi = random_point(1, 2.0, rng);
      CHECK(lmin <= p(psi).real() + 1e-9);
    }
  }
  // inf p = 0 here, yet W = N^2 - 3N + 1 has eigenvalue -1
  PolySymbol sq = number_symbol(1) * number_symbol(1);
  sq += -2.0 * number_symbol(1);
  sq += PolySymbol::constant(1, 1.0);
  const CMatrix w = wick_quantize(sq, ModeSpace(1, 10)).matrix;
  CHECK(std::abs(w(1, 1) + 1.0) < 1e-12);
  CHECK(std::abs(w(2, 2) + 1.0) < 1e-12);
}

TEST_CASE("phi polynomials") {
  const ModeSpace s(1, 4);
  const std::vector<double> sq{0.0, 0.0, 1.0};
  const PolySymbol p = phi_polynomial(sq, s);
  CHECK(std::abs(p.coefficient({2}, {0}) - 0.25) < 1e-15);
  CHECK(std::abs(p.coefficient({0}, {2}) - 0.25) < 1e-15);
  CHECK(std::abs(p.coefficient({1}, {1}) - 0.5) < 1e-15);
  CHECK(p.is_real());
  std::mt19937_64 rng(13);
  for (int i = 0; i < 10; ++i) {
    const PhasePoint psi = random_point(1, 3.0, rng);
    CHECK(std::abs(p(psi) - std::pow(psi[0].real(), 2)) < 1e-13);
  }
  const std::vector<double> c{2.5};
  CHECK(phi_polynomial(c, s).max_coeff_distance(PolySymbol::constant(1, 2.5)) == 0.0);

  const ModeSpace s2(2, 4);
  const std::vector<double> mixed{1.0, -0.5, 0.3, 0.0, 0.2};
  const PolySymbol q = phi_polynomial(mixed, s2);
  CHECK(q.is_real());
  for (int i = 0; i < 10; ++i) {
    const PhasePoint psi = random_point(2, 2.0, rng);
    double expect = 1.0;
    for (int k = 0; k < 2; ++k) {
      const double f = psi[k].real();
      expect += -0.5 * f + 0.3 * f * f + 0.2 * std::pow(f, 4);
    }
    CHECK(std::abs(q(psi) - expect) < 1e-12);
  }
}
