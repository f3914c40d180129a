#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "namecraft/random.hpp"

namespace namecraft {

// Walker/Vose alias table: O(1) draws from a fixed discrete distribution.
class AliasSampler {
 public:
  AliasSampler() = default;
  // Weights must be non-negative, finite, and not all zero.
  explicit AliasSampler(std::span<const double> weights);

  std::size_t sample(Rng& rng) const;
  std::size_t size() const { return prob_.size(); }
  // Normalized probability of index i (for diagnostics and tests).
  double probability(std::size_t i) const { return normalized_[i]; }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
  std::vector<double> normalized_;
};

}  // namespace namecraft
