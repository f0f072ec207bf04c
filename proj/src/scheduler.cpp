#include "hyperion/scheduler.hpp"

#include "hyperion/errors.hpp"

namespace hyperion {

double expected_wait(const NodeState& state) {
  double backlog = state.running_remaining_gflop;
  for (double queued : state.wait_queue_gflop) backlog += queued;
  return backlog / state.compute_gflops;
}

double completion_time(const NodeState& state, const DispatchRequest& req) {
  return req.now_s + expected_wait(state) + req.workload_gflop / state.compute_gflops;
}

DispatchDecision select_node(std::span<const NodeState> tier_states,
                             const DispatchRequest& req, DispatchStats* stats) {
  DispatchDecision best;
  for (int k = 0; k < static_cast<int>(tier_states.size()); ++k) {
    const NodeState& state = tier_states[k];
    if (!state.available || state.mem_available_gb < req.activation_mem_gb) {
      continue;
    }
    if (stats) ++stats->comparisons;
    const double wait = expected_wait(state);
    const double completion = req.now_s + wait + req.workload_gflop / state.compute_gflops;
    if (best.node < 0 || completion < best.expected_completion_s) {
      best = {k, wait, completion};
    }
  }
  if (best.node < 0) {
    throw NoFeasibleNodeError("no available node with enough memory in tier");
  }
  return best;
}

}  // namespace hyperion
