#include "hyperion/oracle.hpp"

#include <limits>
#include <numeric>
#include <string>

#include "hyperion/errors.hpp"
#include "hyperion/partitioner.hpp"

namespace hyperion {

uint64_t partition_count(int num_blocks, int num_tiers) {
  // C(N-1, T-1), saturating.
  const int n = num_blocks - 1;
  int r = num_tiers - 1;
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  uint64_t result = 1;
  for (int i = 1; i <= r; ++i) {
    const uint64_t num = static_cast<uint64_t>(n - r + i);
    if (result > std::numeric_limits<uint64_t>::max() / num) {
      return std::numeric_limits<uint64_t>::max();
    }
    result = result * num / i;
  }
  return result;
}

void enumerate_partitions(int num_blocks, int num_tiers, uint64_t cap,
                          const std::function<void(const Partition&)>& visit) {
  if (num_tiers < 1 || num_tiers > num_blocks) {
    throw ValidationError("enumerate_partitions: need 1 <= T <= N");
  }
  const uint64_t count = partition_count(num_blocks, num_tiers);
  if (count > cap) {
    throw EnumerationCapError(
        count, "enumeration of " + std::to_string(count) +
                   " partitions exceeds cap " + std::to_string(cap));
  }

  Partition partition;
  partition.num_blocks = num_blocks;
  partition.splits.resize(num_tiers - 1);
  std::iota(partition.splits.begin(), partition.splits.end(), 1);

  const int m = num_tiers - 1;
  if (m == 0) {
    visit(partition);
    return;
  }
  while (true) {
    visit(partition);
    // Next lexicographic combination of m values from {1..N-1}.
    int i = m - 1;
    while (i >= 0 && partition.splits[i] == num_blocks - 1 - (m - 1 - i)) --i;
    if (i < 0) break;
    ++partition.splits[i];
    for (int j = i + 1; j < m; ++j) {
      partition.splits[j] = partition.splits[j - 1] + 1;
    }
  }
}

OracleResult brute_force_optimal(const PrefixSums& sums,
                                 const std::vector<int64_t>& caps_milli,
                                 const std::vector<int64_t>& mems_mb,
                                 uint64_t cap) {
  const int tiers = static_cast<int>(caps_milli.size());
  const int blocks = sums.num_blocks();
  if (tiers > blocks) {
    throw InfeasibleMemoryError(tiers, "more tiers than blocks, no non-empty partition");
  }

  OracleResult result;
  bool found = false;
  StageLoad best{0, 1};
  enumerate_partitions(blocks, tiers, cap, [&](const Partition& candidate) {
    ++result.enumerated;
    // Independent arithmetic: interval sums straight off the prefix arrays,
    // exact fraction comparisons, no DP involvement.
    StageLoad worst{0, 1};
    bool memory_ok = true;
    for (int j = 1; j <= tiers; ++j) {
      auto [first, last] = candidate.tier_range(j);
      if (sums.mem_mb[last] - sums.mem_mb[first] > mems_mb[j - 1]) {
        memory_ok = false;
        break;
      }
      StageLoad load{sums.flops_milli[last] - sums.flops_milli[first],
                     caps_milli[j - 1]};
      if (compare_loads(load, worst) > 0) worst = load;
    }
    if (!memory_ok) return;
    // Strict improvement keeps the lexicographically smallest winner.
    if (!found || compare_loads(worst, best) < 0) {
      found = true;
      best = worst;
      result.best_partition = candidate;
    }
  });

  if (!found) {
    throw InfeasibleMemoryError(0, "no memory-feasible partition exists");
  }
  result.best_tau_s = best.seconds();
  return result;
}

int brute_force_dispatch(std::span<const NodeState> tier_states,
                         double workload_gflop, double activation_mem_gb,
                         double now_s) {
  int best = -1;
  double best_completion = 0.0;
  for (int k = 0; k < static_cast<int>(tier_states.size()); ++k) {
    const NodeState& state = tier_states[k];
    if (!state.available || state.mem_available_gb < activation_mem_gb) continue;
    double backlog = state.running_remaining_gflop;
    for (double queued : state.wait_queue_gflop) backlog += queued;
    const double completion =
        now_s + backlog / state.compute_gflops + workload_gflop / state.compute_gflops;
    if (best < 0 || completion < best_completion) {
      best = k;
      best_completion = completion;
    }
  }
  if (best < 0) {
    throw NoFeasibleNodeError("brute_force_dispatch: no feasible node");
  }
  return best;
}

}  // namespace hyperion
