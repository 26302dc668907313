#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cspath/errors.hpp"
#include "cspath/fock.hpp"

namespace cspath {

/// Black-box phase-space function C^M -> C.  Must be pure: it is evaluated
/// concurrently at quadrature nodes.
using SymbolFn = std::function<Complex(std::span<const Complex>)>;

/// Moments of the unit-mass Gaussian measure D[psi] e^{-|psi|^2} on C:
///   int D[psi] e^{-|psi|^2} psi^a conj(psi)^b = a! delta_ab.
/// Multi-mode moments factor across modes.
class GaussianMomentTable {
public:
  explicit GaussianMomentTable(int max_degree = 170);

  /// Shared read-only table covering every degree representable in double.
  static const GaussianMomentTable& standard();

  int max_degree() const { return static_cast<int>(diagonal_.size()) - 1; }

  double moment(int a, int b) const;
  double moment(std::span<const int> a, std::span<const int> b) const;

  /// Copy with moment(degree, degree) scaled by `factor`.  Fault-injection hook
  /// for exercising the exactness checks.
  GaussianMomentTable corrupted(int degree, double factor) const;

private:
  std::vector<double> diagonal_;  // a!
};

/// gaussian_moment against the standard table; throws std::out_of_range when a
/// degree exceeds the table.
double gaussian_moment(std::span<const int> a, std::span<const int> b);

/// n-point Gauss-Laguerre rule for int_0^inf e^{-u} g(u) du.
struct RadialRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
RadialRule gauss_laguerre(int order);

/// Product rule for int D[psi] e^{-|psi|^2} f(psi) over C^M.
///
/// Per mode, psi = sqrt(u) e^{i theta} turns the measure into
/// e^{-u} du x d(theta)/2pi; u is integrated by Gauss-Laguerre with
/// `radial_order` nodes and theta by the equispaced rule with `angular_order`
/// nodes.  The per-mode rules are tensored across modes, so the node count is
/// (radial_order * angular_order)^M.
class PhaseSpaceQuadrature {
public:
  int num_modes() const { return num_modes_; }
  int radial_order() const { return radial_order_; }
  int angular_order() const { return angular_order_; }

  std::size_t size() const { return weights_.size(); }
  std::span<const Complex> node(std::size_t i) const {
    return {nodes_.data() + i * static_cast<std::size_t>(num_modes_),
            static_cast<std::size_t>(num_modes_)};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }
  /// Flattened node coordinates, node i at [i*M, (i+1)*M).
  std::span<const Complex> flat_nodes() const { return nodes_; }

  /// Largest a + b for which psi^a conj(psi)^b is integrated exactly per mode:
  /// min(2 * radial_order - 1, angular_order - 1).
  int guaranteed_degree() const;

  /// Largest modulus |psi_k| among the nodes.
  double max_radius() const;

private:
  friend PhaseSpaceQuadrature build_rule(int, int, int, const GaussianMomentTable&);

  int num_modes_ = 0;
  int radial_order_ = 0;
  int angular_order_ = 0;
  std::vector<Complex> nodes_;
  std::vector<double> weights_;
};

/// Builds and validates the product rule.  Validation integrates every
/// single-mode monomial within guaranteed_degree() and compares with `table`
/// (scaled error <= 1e-12); a mismatch raises QuadratureError.
PhaseSpaceQuadrature build_rule(int num_modes, int radial_order, int angular_order,
                                const GaussianMomentTable& table = GaussianMomentTable::standard());

/// Largest scaled discrepancy |quad - table| / sqrt(a! b!) over the single-mode
/// monomials within the rule's guaranteed degree.
double rule_exactness_error(int radial_order, int angular_order,
                            const GaussianMomentTable& table);

/// sum_i w_i f(node_i).  Deterministic for a fixed rule regardless of thread
/// count.  A non-finite f value raises QuadratureError naming the node.
Complex integrate(const SymbolFn& f, const PhaseSpaceQuadrature& quad);

}  // namespace cspath
