#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hyperion/model_profile.hpp"
#include "hyperion/partition.hpp"
#include "hyperion/scheduler.hpp"

namespace hyperion {

enum class PartitionPolicy { HypsplitDp, GpipeBalanced, HeftGreedy };
enum class DispatchPolicy { HypschedRt, EarliestFinish, RoundRobin };

struct PolicySpec {
  PartitionPolicy partition = PartitionPolicy::HypsplitDp;
  DispatchPolicy dispatch = DispatchPolicy::HypschedRt;
  std::string name = "hyperion";

  // "hyperion" | "heft" | "gpipe"; throws ValidationError otherwise.
  static PolicySpec named(std::string_view name);
};

// Balanced static split by cumulative FLOPs, ignoring tier capacities and
// memory: split j lands at the smallest n with s_f[n] >= j * s_f[N] / T,
// bumped forward to keep the splits strictly increasing.
Partition gpipe_partition(const PrefixSums& sums, int num_tiers);

// Memory-aware greedy sweep. Each tier takes the prefix whose load is
// closest to the capacity-proportional share of the remaining work, shrunk
// until its memory fits; the remainder goes to the last tier, with a repair
// pass that shifts blocks off memory-violating tiers. Throws
// InfeasibleMemoryError if no assignment fits.
Partition heft_partition(const PrefixSums& sums,
                         const std::vector<int64_t>& caps_milli,
                         const std::vector<int64_t>& mems_mb);

// Same contract as select_node, kept as a distinct code path for the HEFT
// baseline.
DispatchDecision earliest_finish_dispatch(std::span<const NodeState> tier_states,
                                          const DispatchRequest& req);

// Per-tier dispatch with state for the round-robin cursor. One instance is
// owned by a single simulation run.
class Dispatcher {
 public:
  Dispatcher(DispatchPolicy policy, int num_tiers)
      : policy_(policy), cursor_(num_tiers, 0) {}

  DispatchDecision dispatch(int tier, std::span<const NodeState> tier_states,
                            const DispatchRequest& req);

 private:
  DispatchPolicy policy_;
  std::vector<int> cursor_;
};

}  // namespace hyperion
