#include "hyperion/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hyperion/errors.hpp"
#include "hyperion/partitioner.hpp"

namespace hyperion {

PolicySpec PolicySpec::named(std::string_view name) {
  if (name == "hyperion") {
    return {PartitionPolicy::HypsplitDp, DispatchPolicy::HypschedRt, "hyperion"};
  }
  if (name == "heft") {
    return {PartitionPolicy::HeftGreedy, DispatchPolicy::EarliestFinish, "heft"};
  }
  if (name == "gpipe") {
    return {PartitionPolicy::GpipeBalanced, DispatchPolicy::RoundRobin, "gpipe"};
  }
  throw ValidationError("unknown policy '" + std::string(name) +
                        "' (expected hyperion|heft|gpipe)");
}

Partition gpipe_partition(const PrefixSums& sums, int num_tiers) {
  const int blocks = sums.num_blocks();
  if (num_tiers < 1 || num_tiers > blocks) {
    throw ValidationError("gpipe_partition: need 1 <= T <= N");
  }
  Partition partition;
  partition.num_blocks = blocks;
  const int64_t total = sums.total_flops_milli();
  int prev = 0;
  for (int j = 1; j < num_tiers; ++j) {
    // Smallest n with s_f[n] >= j * total / T, compared in integers.
    int n = prev + 1;
    while (n < blocks &&
           static_cast<__int128>(sums.flops_milli[n]) * num_tiers <
               static_cast<__int128>(j) * total) {
      ++n;
    }
    // Leave at least one block for each remaining tier.
    n = std::min(n, blocks - (num_tiers - j));
    n = std::max(n, prev + 1);
    partition.splits.push_back(n);
    prev = n;
  }
  validate_partition(partition);
  return partition;
}

namespace {

// One block moved off a memory-violating tier toward a neighbor, preferring
// the neighbor with more headroom. Returns false when stuck.
bool repair_memory(Partition& partition, const PrefixSums& sums,
                   const std::vector<int64_t>& mems_mb) {
  const int tiers = partition.num_tiers();
  for (int round = 0; round < partition.num_blocks * tiers + 1; ++round) {
    int violating = 0;
    for (int j = 1; j <= tiers; ++j) {
      auto [first, last] = partition.tier_range(j);
      if (sums.mem_between(first, last) > mems_mb[j - 1]) {
        violating = j;
        break;
      }
    }
    if (violating == 0) return true;

    const int j = violating;
    auto headroom = [&](int tier) {
      auto [first, last] = partition.tier_range(tier);
      return mems_mb[tier - 1] - sums.mem_between(first, last);
    };
    auto [first, last] = partition.tier_range(j);
    const bool can_left = j > 1 && last - first > 1;
    const bool can_right = j < tiers && last - first > 1;
    bool moved = false;
    const bool prefer_left =
        can_left && (!can_right || headroom(j - 1) >= headroom(j + 1));
    if (prefer_left) {
      ++partition.splits[j - 2];
      moved = true;
    } else if (can_right) {
      --partition.splits[j - 1];
      moved = true;
    } else if (can_left) {
      ++partition.splits[j - 2];
      moved = true;
    }
    if (!moved) return false;
  }
  return false;
}

}  // namespace

Partition heft_partition(const PrefixSums& sums,
                         const std::vector<int64_t>& caps_milli,
                         const std::vector<int64_t>& mems_mb) {
  const int tiers = static_cast<int>(caps_milli.size());
  const int blocks = sums.num_blocks();
  if (tiers > blocks) {
    throw InfeasibleMemoryError(tiers, "more tiers than blocks");
  }

  Partition partition;
  partition.num_blocks = blocks;
  int start = 0;
  for (int j = 1; j < tiers; ++j) {
    const double remaining_flops = static_cast<double>(
        sums.total_flops_milli() - sums.flops_milli[start]);
    double remaining_caps = 0.0;
    for (int l = j; l <= tiers; ++l) remaining_caps += static_cast<double>(caps_milli[l - 1]);
    const double target_time = remaining_flops / remaining_caps;

    const int max_take = blocks - start - (tiers - j);
    auto load = [&](int take) {
      return static_cast<double>(sums.flops_between(start, start + take)) /
             static_cast<double>(caps_milli[j - 1]);
    };
    // Prefix size whose load lands closest to the proportional share.
    int take = 1;
    while (take < max_take && load(take) < target_time) ++take;
    if (take > 1 && load(take) - target_time > target_time - load(take - 1)) {
      --take;
    }
    // Shrink until the tier's memory fits.
    while (take > 1 && sums.mem_between(start, start + take) > mems_mb[j - 1]) {
      --take;
    }
    start += take;
    partition.splits.push_back(start);
  }
  validate_partition(partition);

  if (!satisfies_memory(partition, sums, mems_mb) &&
      !repair_memory(partition, sums, mems_mb)) {
    // Local moves got stuck; fall back to any memory-feasible assignment.
    FeasibilityResult r = check_feasible(-1, sums, caps_milli, mems_mb);
    if (!r.feasible) {
      throw InfeasibleMemoryError(0, "heft_partition: no memory-feasible partition");
    }
    partition = backtrack(r.table);
  }
  if (!satisfies_memory(partition, sums, mems_mb)) {
    throw InfeasibleMemoryError(0, "heft_partition: no memory-feasible partition");
  }
  return partition;
}

DispatchDecision earliest_finish_dispatch(std::span<const NodeState> tier_states,
                                          const DispatchRequest& req) {
  int best = -1;
  double best_wait = 0.0;
  double best_completion = 0.0;
  for (int k = 0; k < static_cast<int>(tier_states.size()); ++k) {
    const NodeState& state = tier_states[k];
    if (!state.available || state.mem_available_gb < req.activation_mem_gb) continue;
    double backlog = state.running_remaining_gflop;
    for (double queued : state.wait_queue_gflop) backlog += queued;
    const double wait = backlog / state.compute_gflops;
    const double completion =
        req.now_s + wait + req.workload_gflop / state.compute_gflops;
    if (best < 0 || completion < best_completion) {
      best = k;
      best_wait = wait;
      best_completion = completion;
    }
  }
  if (best < 0) {
    throw NoFeasibleNodeError("earliest_finish_dispatch: no feasible node");
  }
  return {best, best_wait, best_completion};
}

DispatchDecision Dispatcher::dispatch(int tier,
                                      std::span<const NodeState> tier_states,
                                      const DispatchRequest& req) {
  switch (policy_) {
    case DispatchPolicy::HypschedRt:
      return select_node(tier_states, req);
    case DispatchPolicy::EarliestFinish:
      return earliest_finish_dispatch(tier_states, req);
    case DispatchPolicy::RoundRobin: {
      const int count = static_cast<int>(tier_states.size());
      int& cursor = cursor_.at(tier);
      for (int step = 0; step < count; ++step) {
        const int k = (cursor + step) % count;
        const NodeState& state = tier_states[k];
        if (!state.available || state.mem_available_gb < req.activation_mem_gb) {
          continue;
        }
        cursor = (k + 1) % count;
        const double wait = expected_wait(state);
        return {k, wait, completion_time(state, req)};
      }
      throw NoFeasibleNodeError("round_robin: no feasible node");
    }
  }
  throw ValidationError("unknown dispatch policy");
}

}  // namespace hyperion
