#pragma once

#include <span>
#include <vector>

namespace hyperion {

// Snapshot of one node at dispatch time. The caller is responsible for the
// snapshot being consistent across the whole tier at a single instant; this
// module does no locking.
struct NodeState {
  double compute_gflops = 0.0;
  double mem_capacity_gb = 0.0;
  double mem_available_gb = 0.0;
  double running_remaining_gflop = 0.0;  // 0 when idle
  std::vector<double> wait_queue_gflop;  // FIFO order, each entry > 0
  double busy_accum_s = 0.0;             // metrics only
  bool available = true;
};

struct DispatchRequest {
  double workload_gflop = 0.0;
  double activation_mem_gb = 0.0;
  double now_s = 0.0;
};

struct DispatchDecision {
  int node = -1;
  double expected_wait_s = 0.0;
  double expected_completion_s = 0.0;
};

struct DispatchStats {
  int comparisons = 0;  // candidate evaluations in one call
};

// Remaining work of the running task plus everything queued, divided by the
// node's throughput. Idle with empty queue is 0.
double expected_wait(const NodeState& state);

// now + expected_wait + workload / compute.
double completion_time(const NodeState& state, const DispatchRequest& req);

// Single linear scan over the tier: skip nodes that are down or lack memory
// for the activation, pick the earliest completion, ties to the lowest index.
// Throws NoFeasibleNodeError when no node qualifies.
DispatchDecision select_node(std::span<const NodeState> tier_states,
                             const DispatchRequest& req,
                             DispatchStats* stats = nullptr);

}  // namespace hyperion
