#include "cspath/mode_space.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace cspath {

namespace {

// All n with |n| == shell, lexicographically descending.
void enumerate_shell(int modes, int shell, FockIndex& prefix,
                     std::vector<FockIndex>& out) {
  const int k = static_cast<int>(prefix.size());
  if (k == modes - 1) {
    prefix.push_back(shell);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int n = shell; n >= 0; --n) {
    prefix.push_back(n);
    enumerate_shell(modes, shell - n, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

int total_occupation(std::span<const int> n) {
  return std::accumulate(n.begin(), n.end(), 0);
}

std::size_t fock_dimension(int num_modes, int cutoff) {
  // binomial(M + D, M)
  std::size_t result = 1;
  for (int i = 1; i <= num_modes; ++i) {
    result = result * static_cast<std::size_t>(cutoff + i) / static_cast<std::size_t>(i);
  }
  return result;
}

ModeSpace::ModeSpace(int num_modes, int cutoff)
    : ModeSpace(num_modes, cutoff, std::vector<double>(num_modes > 0 ? num_modes : 0, 1.0),
                std::vector<double>(num_modes > 0 ? num_modes : 0, 1.0)) {}

ModeSpace::ModeSpace(int num_modes, int cutoff, std::vector<double> frequencies,
                     std::vector<double> scale_weights)
    : num_modes_(num_modes),
      cutoff_(cutoff),
      frequencies_(std::move(frequencies)),
      scale_weights_(std::move(scale_weights)) {
  if (num_modes_ < 1) throw std::invalid_argument("ModeSpace: num_modes must be >= 1");
  if (cutoff_ < 1) throw std::invalid_argument("ModeSpace: cutoff must be >= 1");
  if (static_cast<int>(frequencies_.size()) != num_modes_ ||
      static_cast<int>(scale_weights_.size()) != num_modes_) {
    throw std::invalid_argument("ModeSpace: need one frequency and one scale weight per mode");
  }
  for (int k = 0; k < num_modes_; ++k) {
    if (!(frequencies_[k] > 0.0)) {
      throw std::invalid_argument("ModeSpace: frequency of mode " + std::to_string(k) +
                                  " must be positive");
    }
    if (!(scale_weights_[k] >= 1.0)) {
      throw std::invalid_argument("ModeSpace: scale weight of mode " + std::to_string(k) +
                                  " must be >= 1");
    }
  }

  auto basis = std::make_shared<Basis>();
  basis->states.reserve(fock_dimension(num_modes_, cutoff_));
  FockIndex prefix;
  for (int shell = 0; shell <= cutoff_; ++shell) {
    enumerate_shell(num_modes_, shell, prefix, basis->states);
    basis->shell_end.push_back(basis->states.size());
  }
  for (std::size_t i = 0; i < basis->states.size(); ++i) {
    basis->lookup.emplace(basis->states[i], i);
  }
  basis_ = std::move(basis);
}

long ModeSpace::index_of(std::span<const int> n) const {
  if (static_cast<int>(n.size()) != num_modes_) return -1;
  for (int v : n) {
    if (v < 0) return -1;
  }
  auto it = basis_->lookup.find(FockIndex(n.begin(), n.end()));
  return it == basis_->lookup.end() ? -1 : static_cast<long>(it->second);
}

std::size_t ModeSpace::block_size(int level) const {
  if (level < 0) return 0;
  if (level >= cutoff_) return dim();
  return basis_->shell_end[static_cast<std::size_t>(level)];
}

ModeSpace ModeSpace::with_frequencies(std::vector<double> frequencies) const {
  return ModeSpace(num_modes_, cutoff_, std::move(frequencies), scale_weights_);
}

ModeSpace ModeSpace::with_cutoff(int cutoff) const {
  return ModeSpace(num_modes_, cutoff, frequencies_, scale_weights_);
}

}  // namespace cspath
