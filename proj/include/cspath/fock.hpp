#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cspath/mode_space.hpp"

namespace cspath {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// A point psi in C^M (coherent-state amplitude, quadrature node, ...).
using PhasePoint = std::vector<Complex>;

/// State on the truncated Fock basis of `space`.
struct FockVector {
  ModeSpace space;
  CVector amplitudes;

  double norm_squared() const { return amplitudes.squaredNorm(); }
};

/// Dense operator on the truncated Fock basis of `space`.
struct FockOperator {
  ModeSpace space;
  CMatrix matrix;

  FockOperator adjoint() const { return {space, matrix.adjoint()}; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
};

FockOperator operator*(const FockOperator& a, const FockOperator& b);
FockOperator operator+(const FockOperator& a, const FockOperator& b);
FockOperator operator-(const FockOperator& a, const FockOperator& b);
FockOperator operator*(Complex s, const FockOperator& a);
FockVector operator*(const FockOperator& a, const FockVector& v);

/// <a|b>, antilinear in the first argument.
Complex inner(const FockVector& a, const FockVector& b);

FockOperator identity_operator(const ModeSpace& space);

struct LadderOperators {
  std::vector<FockOperator> annihilation;  // A_k
  std::vector<FockOperator> creation;      // C_k
};

/// A_k|n> = sqrt(n_k)|n - e_k>, C_k|n> = sqrt(n_k + 1)|n + e_k>, with raising
/// past the cutoff mapped to zero.  [A_j, C_k] = delta_jk holds on the
/// interior (margin 1) only.
LadderOperators ladder_operators(const ModeSpace& space);

/// H0 = sum_k omega_k C_k A_k (diagonal, eigenvalue sum_k omega_k n_k).
FockOperator free_hamiltonian(const ModeSpace& space);

/// H_rho = sum_k lambda_k^{-2 rho} C_k A_k.  Throws std::invalid_argument for
/// rho < 0.
FockOperator h_rho_operator(const ModeSpace& space, double rho);

/// Unnormalized coherent state e^psi with components prod_k psi_k^{n_k} / sqrt(n_k!).
FockVector coherent_vector(const ModeSpace& space, std::span<const Complex> psi);

/// exp(<psi2|psi1>) = exp(sum_k conj(psi2_k) psi1_k), no truncation.
Complex coherent_overlap(std::span<const Complex> psi2, std::span<const Complex> psi1);

/// Squared norm of the part of e^psi discarded by the cutoff:
/// sum_{|n| > D} prod_k |psi_k|^{2 n_k} / n_k!  =  sum_{d > D} ||psi||^{2d} / d!.
/// The multinomial identity makes this exact rather than an estimate.
double tail_bound(const ModeSpace& space, std::span<const Complex> psi);

/// Orthogonal projector onto span{|n> : |n| <= D - margin}.  Throws
/// std::invalid_argument when margin > D.
FockOperator interior_projector(const ModeSpace& space, int margin);

/// Largest singular value.
double spectral_norm(const CMatrix& m);

double max_abs_entry(const CMatrix& m);

}  // namespace cspath
