#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hyperion/model_profile.hpp"
#include "hyperion/partition.hpp"
#include "hyperion/scheduler.hpp"

// Brute-force reference solvers. They share only the Partition type with the
// production code paths; the DP and the linear-scan scheduler are never
// called from here.

namespace hyperion {

struct OracleResult {
  Partition best_partition;
  double best_tau_s = 0.0;
  uint64_t enumerated = 0;  // candidates examined, C(N-1, T-1)
};

// C(N-1, T-1), saturating at UINT64_MAX.
uint64_t partition_count(int num_blocks, int num_tiers);

// Yields every strictly increasing (T-1)-subset of {1..N-1} exactly once, in
// lexicographic order. Throws EnumerationCapError before yielding anything
// when the count exceeds `cap`.
void enumerate_partitions(int num_blocks, int num_tiers, uint64_t cap,
                          const std::function<void(const Partition&)>& visit);

// Exhaustive minimization of the bottleneck stage time over all
// memory-feasible partitions; ties go to the lexicographically smallest
// split vector. Throws InfeasibleMemoryError when nothing fits.
OracleResult brute_force_optimal(const PrefixSums& sums,
                                 const std::vector<int64_t>& caps_milli,
                                 const std::vector<int64_t>& mems_mb,
                                 uint64_t cap = 1'000'000);

// Evaluates the completion time on every feasible node independently and
// returns the argmin, ties to the lowest index.
int brute_force_dispatch(std::span<const NodeState> tier_states,
                         double workload_gflop, double activation_mem_gb,
                         double now_s);

}  // namespace hyperion
