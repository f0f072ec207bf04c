#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hyperion/model_profile.hpp"

namespace hyperion {

// Split vector p = (p_1, ..., p_{T-1}) over N blocks, with p_0 = 0 and
// p_T = N implied. Tier j (1-based) runs blocks (p_{j-1}, p_j].
struct Partition {
  std::vector<int> splits;
  int num_blocks = 0;

  int num_tiers() const { return static_cast<int>(splits.size()) + 1; }

  // Half-open-in-spirit range for tier j (1-based): blocks first+1 .. last.
  std::pair<int, int> tier_range(int tier) const {
    int first = tier == 1 ? 0 : splits[tier - 2];
    int last = tier == num_tiers() ? num_blocks : splits[tier - 1];
    return {first, last};
  }
};

// Enforces 1 <= p_1 < ... < p_{T-1} < N, so every tier gets at least one
// block and the ranges tile 1..N. Throws ValidationError.
void validate_partition(const Partition& partition);

// True when every tier's memory footprint fits its effective capacity.
bool satisfies_memory(const Partition& partition, const PrefixSums& sums,
                      const std::vector<int64_t>& mems_mb);

}  // namespace hyperion
