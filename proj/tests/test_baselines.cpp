#include <doctest.h>

#include <vector>

#include "hyperion/baselines.hpp"
#include "hyperion/errors.hpp"
#include "hyperion/partitioner.hpp"
#include "hyperion/units.hpp"
#include "hyperion/verify.hpp"

using namespace hyperion;

namespace {

PrefixSums uniform_sums(int blocks, double flops, double mem) {
  PrefixSums sums;
  sums.flops_milli.push_back(0);
  sums.mem_mb.push_back(0);
  for (int i = 0; i < blocks; ++i) {
    sums.flops_milli.push_back(sums.flops_milli.back() + to_milli(flops));
    sums.mem_mb.push_back(sums.mem_mb.back() + to_milli(mem));
  }
  return sums;
}

NodeState idle_node(double compute) {
  NodeState state;
  state.compute_gflops = compute;
  state.mem_capacity_gb = 8.0;
  state.mem_available_gb = 8.0;
  return state;
}

}  // namespace

TEST_CASE("policy names map to partition/dispatch pairs") {
  CHECK(PolicySpec::named("hyperion").partition == PartitionPolicy::HypsplitDp);
  CHECK(PolicySpec::named("hyperion").dispatch == DispatchPolicy::HypschedRt);
  CHECK(PolicySpec::named("heft").partition == PartitionPolicy::HeftGreedy);
  CHECK(PolicySpec::named("heft").dispatch == DispatchPolicy::EarliestFinish);
  CHECK(PolicySpec::named("gpipe").partition == PartitionPolicy::GpipeBalanced);
  CHECK(PolicySpec::named("gpipe").dispatch == DispatchPolicy::RoundRobin);
  CHECK_THROWS_AS(PolicySpec::named("fifo"), ValidationError);
}

TEST_CASE("gpipe balances cumulative flops, blind to capacities") {
  CHECK(gpipe_partition(uniform_sums(32, 1.0, 1.0), 3).splits ==
        std::vector<int>{11, 22});
  CHECK(gpipe_partition(uniform_sums(4, 1.0, 1.0), 2).splits ==
        std::vector<int>{2});

  PrefixSums skewed;
  skewed.flops_milli = {0, 10000, 11000, 12000, 13000};
  skewed.mem_mb = {0, 1000, 2000, 3000, 4000};
  CHECK(gpipe_partition(skewed, 2).splits == std::vector<int>{1});

  CHECK_THROWS_AS(gpipe_partition(uniform_sums(2, 1.0, 1.0), 3), ValidationError);
}

TEST_CASE("gpipe output is always a valid partition") {
  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const RandomInstance inst = random_instance(rng, 12, false);
    const int tiers = static_cast<int>(inst.caps_milli.size());
    validate_partition(gpipe_partition(inst.sums, tiers));
  }
}

TEST_CASE("heft takes capacity-proportional prefixes") {
  const PrefixSums sums = uniform_sums(4, 1.0, 1.0);
  const std::vector<int64_t> ample = {1'000'000, 1'000'000};

  CHECK(heft_partition(sums, {1000, 1000}, ample).splits == std::vector<int>{2});
  CHECK(heft_partition(sums, {1000, 3000}, ample).splits == std::vector<int>{1});

  // Tier-1 memory caps the prefix regardless of the load target.
  CHECK(heft_partition(sums, {1000, 1000}, {1000, 1'000'000}).splits ==
        std::vector<int>{1});
}

TEST_CASE("heft respects memory whenever it returns") {
  Rng rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    const RandomInstance inst = random_instance(rng, 12, trial % 2 == 0);
    const Partition p = heft_partition(inst.sums, inst.caps_milli, inst.mems_mb);
    validate_partition(p);
    REQUIRE(satisfies_memory(p, inst.sums, inst.mems_mb));
  }
}

TEST_CASE("optimal partition dominates both baselines") {
  Rng rng(47);
  for (int trial = 0; trial < 200; ++trial) {
    const RandomInstance inst = random_instance(rng, 12, false);
    const int tiers = static_cast<int>(inst.caps_milli.size());
    // 1 us precision: the witness bottleneck is exactly optimal here because
    // integer-GFLOP loads over integer capacities are at least 400 us apart.
    const auto best = solve(inst.sums, inst.caps_milli, inst.mems_mb, 1e-6);
    const StageLoad ours = bottleneck_load(best.partition, inst.sums, inst.caps_milli);
    const StageLoad gpipe = bottleneck_load(gpipe_partition(inst.sums, tiers),
                                            inst.sums, inst.caps_milli);
    const StageLoad heft = bottleneck_load(
        heft_partition(inst.sums, inst.caps_milli, inst.mems_mb),
        inst.sums, inst.caps_milli);
    REQUIRE(compare_loads(ours, gpipe) <= 0);
    REQUIRE(compare_loads(ours, heft) <= 0);
  }
}

TEST_CASE("earliest finish matches the reference arithmetic") {
  std::vector<NodeState> states = {idle_node(2.0), idle_node(1.0)};
  states[0].wait_queue_gflop = {6.0};
  CHECK(earliest_finish_dispatch(states, {4.0, 0.0, 0.0}).node == 1);
}

TEST_CASE("round robin cycles and skips infeasible nodes") {
  std::vector<NodeState> states = {idle_node(2.0), idle_node(2.0), idle_node(2.0)};
  Dispatcher rr(DispatchPolicy::RoundRobin, 1);
  const DispatchRequest req{4.0, 0.0, 0.0};
  std::vector<int> order;
  for (int i = 0; i < 4; ++i) order.push_back(rr.dispatch(0, states, req).node);
  CHECK(order == std::vector<int>{0, 1, 2, 0});

  states[1].available = false;
  Dispatcher rr2(DispatchPolicy::RoundRobin, 1);
  order.clear();
  for (int i = 0; i < 4; ++i) order.push_back(rr2.dispatch(0, states, req).node);
  CHECK(order == std::vector<int>{0, 2, 0, 2});

  states[0].available = false;
  states[2].mem_available_gb = 0.0;
  Dispatcher rr3(DispatchPolicy::RoundRobin, 1);
  CHECK_THROWS_AS(rr3.dispatch(0, states, {4.0, 0.5, 0.0}), NoFeasibleNodeError);
}
