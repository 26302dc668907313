#pragma once

#include <compare>
#include <complex>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "cspath/fock.hpp"

namespace cspath {

/// Exponents of conj(psi)^bar * psi^hol.  Under Wick quantization this is the
/// normal-ordered product C^bar A^hol; under Toeplitz (Berezin) quantization
/// it is the anti-normal product A^hol C^bar.
struct Monomial {
  FockIndex bar;
  FockIndex hol;

  int degree() const { return total_occupation(bar) + total_occupation(hol); }
  auto operator<=>(const Monomial&) const = default;
};

/// Polynomial in (conj(psi), psi) on C^M.
///
/// The coefficient tensors c_kl (k creation slots, l annihilation slots,
/// symmetric within each group) are stored in contracted form: one
/// coefficient per monomial.  A tensor entry c_kl[i_1..i_k; j_1..j_l] maps to
/// the monomial with bar = multiplicities of (i_1..i_k) and hol =
/// multiplicities of (j_1..j_l); see tensor_entry / add_tensor_entry.
///
/// Pairing convention: creation slots pair with conj(psi), annihilation slots
/// with psi, so p(psi) = sum c_kl[i;j] conj(psi_i1)..conj(psi_ik) psi_j1..psi_jl
/// and wick_quantize(p) = sum c_kl[i;j] C_i1..C_ik A_j1..A_jl.
class PolySymbol {
public:
  explicit PolySymbol(int num_modes);

  static PolySymbol constant(int num_modes, Complex value);
  static PolySymbol monomial(int num_modes, FockIndex bar, FockIndex hol, Complex coeff = 1.0);
  /// sum_k weights[k] |psi_k|^2
  static PolySymbol number(std::span<const double> weights);

  int num_modes() const { return num_modes_; }
  const std::map<Monomial, Complex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Highest total degree among stored terms (0 for the zero polynomial).
  int degree() const;

  /// Adds coeff to the monomial conj(psi)^bar psi^hol.
  void add(const FockIndex& bar, const FockIndex& hol, Complex coeff);
  Complex coefficient(const FockIndex& bar, const FockIndex& hol) const;

  /// Adds `value` as the tensor entry c_kl[creation; annihilation] (mode
  /// indices, any order).  Only the symmetrization of the tensor is
  /// observable, so entries that are permutations of each other accumulate.
  void add_tensor_entry(std::span<const int> creation, std::span<const int> annihilation,
                        Complex value);
  /// Entry of the symmetric tensor c_kl at the given index tuples.
  Complex tensor_entry(std::span<const int> creation, std::span<const int> annihilation) const;

  Complex operator()(std::span<const Complex> psi) const;

  /// Pointwise complex conjugate (Wick/Berezin symbol of the adjoint).
  PolySymbol conjugate() const;
  /// True when the symbol is real-valued: c(hol, bar) = conj(c(bar, hol)).
  bool is_real(double tol = 1e-12) const;

  /// Terms of total degree equal to degree().
  PolySymbol principal_part() const;
  /// Terms with total degree <= max_degree.
  PolySymbol truncated(int max_degree) const;

  /// d/d conj(psi_k) and d/d psi_k (Wirtinger derivatives).
  PolySymbol diff_bar(int k) const;
  PolySymbol diff_hol(int k) const;

  /// Drops coefficients with |c| <= tol.
  PolySymbol pruned(double tol) const;

  /// max over monomials of |c_this - c_other|.
  double max_coeff_distance(const PolySymbol& other) const;

  PolySymbol& operator+=(const PolySymbol& other);
  PolySymbol& operator-=(const PolySymbol& other);
  PolySymbol& operator*=(Complex s);

  friend PolySymbol operator+(PolySymbol a, const PolySymbol& b) { return a += b; }
  friend PolySymbol operator-(PolySymbol a, const PolySymbol& b) { return a -= b; }
  friend PolySymbol operator*(Complex s, PolySymbol a) { return a *= s; }
  friend PolySymbol operator*(const PolySymbol& a, const PolySymbol& b);

private:
  void require_modes(const FockIndex& idx) const;

  int num_modes_;
  std::map<Monomial, Complex> terms_;
};

/// Raised on malformed symbol files.
class SymbolFormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Plain-text symbol format:
///
///     # comment
///     modes <M>
///     <k> <l> <i_1> ... <i_k> <j_1> ... <j_l> <re> <im>
///
/// One line per tensor entry c_kl[i; j] with 0-based mode indices; i are the
/// creation (conj psi) slots, j the annihilation (psi) slots.  Entries
/// accumulate, so a tensor may be listed sparsely or in full.
void write_symbol(std::ostream& os, const PolySymbol& p);
PolySymbol read_symbol(std::istream& is);
PolySymbol read_symbol_file(const std::string& path);

}  // namespace cspath
