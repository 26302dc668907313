#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <vector>

namespace cspath {

/// Occupation multi-index n = (n_1, ..., n_M).
using FockIndex = std::vector<int>;

int total_occupation(std::span<const int> n);

/// Finite phase-space model: M boson modes with a total-occupation cutoff
/// sum_k n_k <= D, per-mode frequencies omega_k > 0 and scale weights
/// lambda_k >= 1 (eigenvalues of the scaling operator).
///
/// The basis is ordered by total occupation first, so every interior
/// subspace {sum n_k <= D - margin} is a leading block of the basis.  Within
/// one occupation shell states are ordered lexicographically descending,
/// e.g. |00>, |10>, |01>, |20>, |11>, |02>, ...
///
/// Copies are cheap; the enumerated basis is shared and immutable.
class ModeSpace {
public:
  ModeSpace(int num_modes, int cutoff);
  ModeSpace(int num_modes, int cutoff, std::vector<double> frequencies,
            std::vector<double> scale_weights);

  int num_modes() const { return num_modes_; }
  int cutoff() const { return cutoff_; }
  const std::vector<double>& frequencies() const { return frequencies_; }
  const std::vector<double>& scale_weights() const { return scale_weights_; }

  std::size_t dim() const { return basis_->states.size(); }
  const FockIndex& state(std::size_t i) const { return basis_->states[i]; }
  const std::vector<FockIndex>& states() const { return basis_->states; }

  /// Linear position of |n>, or -1 when n is outside the truncated basis.
  long index_of(std::span<const int> n) const;

  /// Number of basis states with total occupation <= level.
  std::size_t block_size(int level) const;

  ModeSpace with_frequencies(std::vector<double> frequencies) const;
  ModeSpace with_cutoff(int cutoff) const;

  bool same_shape(const ModeSpace& other) const {
    return num_modes_ == other.num_modes_ && cutoff_ == other.cutoff_;
  }

private:
  struct Basis {
    std::vector<FockIndex> states;
    std::map<FockIndex, std::size_t> lookup;
    std::vector<std::size_t> shell_end;  // shell_end[d] = #states with |n| <= d
  };

  int num_modes_;
  int cutoff_;
  std::vector<double> frequencies_;
  std::vector<double> scale_weights_;
  std::shared_ptr<const Basis> basis_;
};

/// Number of multi-indices in N^M with total occupation <= D.
std::size_t fock_dimension(int num_modes, int cutoff);

}  // namespace cspath
