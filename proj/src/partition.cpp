#include "hyperion/partition.hpp"

#include <string>

#include "hyperion/errors.hpp"

namespace hyperion {

void validate_partition(const Partition& partition) {
  const int n = partition.num_blocks;
  const int t = partition.num_tiers();
  if (n < 1) {
    throw ValidationError("partition: num_blocks must be >= 1");
  }
  if (t > n) {
    throw ValidationError("partition: " + std::to_string(t) + " tiers over " +
                          std::to_string(n) + " blocks leaves an empty tier");
  }
  int prev = 0;
  for (int split : partition.splits) {
    if (split <= prev || split >= n) {
      throw ValidationError("partition: splits must satisfy 1 <= p_1 < ... < p_{T-1} < N");
    }
    prev = split;
  }
}

bool satisfies_memory(const Partition& partition, const PrefixSums& sums,
                      const std::vector<int64_t>& mems_mb) {
  for (int j = 1; j <= partition.num_tiers(); ++j) {
    auto [first, last] = partition.tier_range(j);
    if (sums.mem_between(first, last) > mems_mb[j - 1]) return false;
  }
  return true;
}

}  // namespace hyperion
