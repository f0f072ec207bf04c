#include <doctest.h>

#include <vector>

#include "hyperion/errors.hpp"
#include "hyperion/oracle.hpp"
#include "hyperion/scheduler.hpp"
#include "hyperion/verify.hpp"

using namespace hyperion;

namespace {

NodeState idle_node(double compute) {
  NodeState state;
  state.compute_gflops = compute;
  state.mem_capacity_gb = 8.0;
  state.mem_available_gb = 8.0;
  return state;
}

}  // namespace

TEST_CASE("expected wait prices the whole backlog") {
  NodeState idle = idle_node(2.0);
  CHECK(expected_wait(idle) == 0.0);

  NodeState loaded = idle_node(2.0);
  loaded.running_remaining_gflop = 2.0;
  loaded.wait_queue_gflop = {3.0, 5.0};
  CHECK(expected_wait(loaded) == doctest::Approx(5.0));

  NodeState queued = idle_node(1.0);
  queued.wait_queue_gflop = {7.0};
  CHECK(expected_wait(queued) == doctest::Approx(7.0));
}

TEST_CASE("completion time adds wait and service") {
  NodeState idle = idle_node(2.0);
  CHECK(completion_time(idle, {4.0, 0.0, 10.0}) == doctest::Approx(12.0));

  NodeState loaded = idle_node(2.0);
  loaded.running_remaining_gflop = 10.0;  // 5 s of backlog
  CHECK(completion_time(loaded, {4.0, 0.0, 0.0}) == doctest::Approx(7.0));

  CHECK(completion_time(loaded, {1e-12, 0.0, 0.0}) ==
        doctest::Approx(expected_wait(loaded)));
}

TEST_CASE("select_node picks the earliest completion") {
  std::vector<NodeState> states = {idle_node(2.0), idle_node(1.0)};
  DispatchDecision d = select_node(states, {4.0, 0.0, 0.0});
  CHECK(d.node == 0);
  CHECK(d.expected_completion_s == doctest::Approx(2.0));

  states[0].wait_queue_gflop = {6.0};  // (6+4)/2 = 5 s vs 4 s
  d = select_node(states, {4.0, 0.0, 0.0});
  CHECK(d.node == 1);

  // Memory filter overrides cost.
  states[0].wait_queue_gflop.clear();
  states[0].mem_available_gb = 0.1;
  d = select_node(states, {4.0, 0.5, 0.0});
  CHECK(d.node == 1);
}

TEST_CASE("ties break to the lowest index") {
  std::vector<NodeState> states = {idle_node(2.0), idle_node(2.0), idle_node(2.0)};
  CHECK(select_node(states, {4.0, 0.0, 0.0}).node == 0);
}

TEST_CASE("no feasible node throws") {
  std::vector<NodeState> states = {idle_node(2.0)};
  states[0].available = false;
  CHECK_THROWS_AS(select_node(states, {4.0, 0.0, 0.0}), NoFeasibleNodeError);
}

TEST_CASE("single linear scan: at most one comparison per node") {
  Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const RandomDispatchCase c = random_dispatch_case(rng, 16);
    DispatchStats stats;
    select_node(c.states, c.request, &stats);
    REQUIRE(stats.comparisons <= static_cast<int>(c.states.size()));
  }
}

TEST_CASE("chosen node dominates every feasible node") {
  Rng rng(19);
  for (int trial = 0; trial < 500; ++trial) {
    const RandomDispatchCase c = random_dispatch_case(rng, 16);
    const DispatchDecision d = select_node(c.states, c.request);
    for (const NodeState& state : c.states) {
      if (!state.available || state.mem_available_gb < c.request.activation_mem_gb) {
        continue;
      }
      REQUIRE(d.expected_completion_s <= completion_time(state, c.request) + 1e-12);
    }
  }
}

TEST_CASE("choice is invariant under a common compute/workload scale") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    RandomDispatchCase c = random_dispatch_case(rng, 8);
    const int before = select_node(c.states, c.request).node;
    const double scale = rng.next_uniform(0.25, 8.0);
    for (NodeState& state : c.states) {
      state.compute_gflops *= scale;
      state.running_remaining_gflop *= scale;
      for (double& w : state.wait_queue_gflop) w *= scale;
    }
    c.request.workload_gflop *= scale;
    REQUIRE(select_node(c.states, c.request).node == before);
  }
}

TEST_CASE("agrees with the brute-force oracle") {
  Rng rng(29);
  for (int trial = 0; trial < 2000; ++trial) {
    const RandomDispatchCase c = random_dispatch_case(rng, 16);
    const DispatchDecision d = select_node(c.states, c.request);
    const int expected = brute_force_dispatch(
        c.states, c.request.workload_gflop, c.request.activation_mem_gb,
        c.request.now_s);
    REQUIRE(d.node == expected);
  }
}
