#include <doctest.h>

#include <cmath>
#include <vector>

#include "hyperion/errors.hpp"
#include "hyperion/json_io.hpp"
#include "hyperion/simulator.hpp"
#include "sim_checks.hpp"

using namespace hyperion;

namespace {

Topology chain_topology(const std::vector<double>& computes,
                        const std::vector<double>& memories,
                        double rate_bps = 1e9) {
  Topology topology;
  for (size_t j = 0; j < computes.size(); ++j) {
    TierSpec tier;
    tier.nodes.push_back({computes[j], memories[j], 1.0});
    topology.tiers.push_back(tier);
  }
  for (size_t i = 0; i + 1 < computes.size(); ++i) {
    LinkSpec link;
    link.rate_bps = rate_bps;
    topology.links.push_back(link);
  }
  return topology;
}

SimConfig quiet_config(int tasks) {
  SimConfig cfg;
  cfg.num_tasks = tasks;
  cfg.lambda = 0.001;  // effectively serial arrivals
  cfg.prompt_tokens = 1;
  cfg.output_tokens = 1;
  return cfg;
}

}  // namespace

TEST_CASE("single-stage service time") {
  const ModelProfile profile = build_profile("m", 1, 2.0, 0.1, 10, 2);
  const Topology topology = chain_topology({2.0}, {10.0});
  const Partition partition{{}, 1};
  const SimConfig cfg = quiet_config(1);

  // Workload = prefill (1 token) + 1 decode token = 4 GFLOP on a 2 GFLOP/s node.
  const SimReport report = run(cfg, topology, profile, partition);
  CHECK(report.completed == 1);
  CHECK(report.tasks[0].latency_s == doctest::Approx(2.0));
  CHECK(simcheck::check_invariants(report, cfg, topology, profile).empty());
}

TEST_CASE("two-stage pipeline adds the hop latency") {
  // Stage workloads [2, 3] GFLOP, 1e6-byte activation over 1 Gbps.
  ModelProfile profile = build_profile("m", 2, 1.0, 0.1, 500000, 2);
  profile.blocks[1].flops_gflop = 1.5;
  const Topology topology = chain_topology({1.0, 1.0}, {10.0, 10.0});
  const Partition partition{{1}, 2};
  const SimConfig cfg = quiet_config(1);

  const SimReport report = run(cfg, topology, profile, partition);
  CHECK(report.tasks[0].latency_s == doctest::Approx(5.008).epsilon(1e-12));
  CHECK(simcheck::check_invariants(report, cfg, topology, profile).empty());
}

TEST_CASE("contended single-server tiers stay FIFO and exclusive") {
  const ModelProfile profile = build_profile("m", 4, 1.0, 0.1, 64, 2);
  const Topology topology = chain_topology({2.0, 2.0}, {10.0, 10.0});
  const Partition partition{{2}, 4};
  SimConfig cfg;
  cfg.num_tasks = 8;
  cfg.lambda = 2.0;  // arrivals far faster than service
  cfg.prompt_tokens = 1;
  cfg.output_tokens = 1;

  const SimReport report = run(cfg, topology, profile, partition);
  CHECK(report.completed == 8);
  const auto bad = simcheck::check_invariants(report, cfg, topology, profile);
  for (const auto& what : bad) MESSAGE(what);
  CHECK(bad.empty());

  // With one node per tier, the second task starts exactly when the first
  // stage frees up.
  double first_complete = -1.0;
  for (const auto& e : report.timeline) {
    if (e.kind == EventKind::StageComplete && e.task == 0 && e.tier == 1) {
      first_complete = e.time_s;
    }
    if (e.kind == EventKind::StageStart && e.task == 1 && e.tier == 1) {
      CHECK(e.time_s == doctest::Approx(first_complete));
    }
  }
}

TEST_CASE("per-token granularity pipelines decode passes") {
  const ModelProfile profile = build_profile("m", 4, 0.5, 0.1, 64, 2);
  const Topology topology = chain_topology({4.0, 4.0}, {10.0, 10.0});
  const Partition partition{{2}, 4};
  SimConfig cfg = quiet_config(2);
  cfg.granularity = Granularity::PerToken;
  cfg.prompt_tokens = 4;
  cfg.output_tokens = 8;

  const SimReport report = run(cfg, topology, profile, partition);
  CHECK(report.completed == 2);
  const auto bad = simcheck::check_invariants(report, cfg, topology, profile);
  for (const auto& what : bad) MESSAGE(what);
  CHECK(bad.empty());

  // 1 prefill + 8 decode passes, two stage entries each, for both tasks.
  int completions = 0;
  for (const auto& e : report.timeline) {
    completions += e.kind == EventKind::StageComplete;
  }
  CHECK(completions == 2 * 9 * 2);
}

TEST_CASE("poisson arrivals have the configured mean gap") {
  const ModelProfile profile = build_profile("m", 2, 1.0, 0.1, 64, 2);
  SimConfig cfg;
  cfg.num_tasks = 100000;
  cfg.lambda = 0.2;
  const auto tasks = generate_workload(cfg, profile, Partition{{}, 2});
  double prev = 0.0, total = 0.0;
  for (const Task& task : tasks) {
    total += task.arrival_s - prev;
    prev = task.arrival_s;
  }
  const double mean_gap = total / static_cast<double>(tasks.size());
  CHECK(mean_gap > 4.9);
  CHECK(mean_gap < 5.1);
}

TEST_CASE("identical seeds reproduce byte-identical reports") {
  const ModelProfile profile = build_profile("m", 6, 1.0, 0.2, 64, 2);
  const Topology topology = chain_topology({3.0, 5.0}, {10.0, 10.0});
  const Partition partition{{3}, 6};
  SimConfig cfg;
  cfg.num_tasks = 10;
  cfg.lambda = 0.5;
  cfg.seed = 1234;

  const RunManifest manifest = RunManifest::make({}, cfg.seed, {"hyperion"});
  const std::string a =
      report_to_json(run(cfg, topology, profile, partition), manifest).dump();
  const std::string b =
      report_to_json(run(cfg, topology, profile, partition), manifest).dump();
  CHECK(a == b);

  cfg.seed = 1235;
  const std::string c =
      report_to_json(run(cfg, topology, profile, partition), manifest).dump();
  CHECK(a != c);
}

TEST_CASE("memory-infeasible partitions are refused up front") {
  const ModelProfile profile = build_profile("m", 4, 1.0, 2.0, 64, 2);
  const Topology topology = chain_topology({2.0, 2.0}, {3.0, 10.0});
  CHECK_THROWS_AS(run(quiet_config(1), topology, profile, Partition{{2}, 4}),
                  InfeasibleMemoryError);
}

TEST_CASE("dispatch starvation fails the task and the run continues") {
  // The shard fits, but the activation payload (0.2 GB) does not.
  const ModelProfile profile = build_profile("m", 2, 1.0, 2.0, 1'000'000, 2);
  const Topology topology = chain_topology({2.0}, {4.1});
  SimConfig cfg = quiet_config(3);
  cfg.prompt_tokens = 100;

  const SimReport report = run(cfg, topology, profile, Partition{{}, 2});
  CHECK(report.failed == 3);
  CHECK(report.completed == 0);
  CHECK(simcheck::check_invariants(report, cfg, topology, profile).empty());
}

TEST_CASE("serial arrivals see the bare pipeline latency") {
  const ModelProfile profile = build_profile("m", 4, 1.0, 0.2, 64, 2);
  const Topology topology = chain_topology({2.0, 2.0}, {10.0, 10.0});

  SimConfig cfg = quiet_config(3);
  const auto rows = compare(cfg, topology, profile, {"hyperion"}, {3});
  REQUIRE(rows.size() == 1);

  cfg.num_tasks = 1;
  cfg.policy = PolicySpec::named("hyperion");
  const Partition partition = build_partition(cfg.policy.partition,
                                              prefix_sums(profile), topology);
  const SimReport single = run(cfg, topology, profile, partition);
  CHECK(rows[0].mean_latency_s == doctest::Approx(single.tasks[0].latency_s));
}

TEST_CASE("queue wait stays bounded well below saturation") {
  const ModelProfile profile = build_profile("m", 4, 1.0, 0.2, 64, 2);
  const Topology topology = chain_topology({2.0, 2.0}, {10.0, 10.0});
  const Partition partition{{2}, 4};
  SimConfig cfg;
  cfg.lambda = 0.02;  // mean gap 50 s vs 2 s stages
  cfg.prompt_tokens = 1;
  cfg.output_tokens = 1;

  cfg.num_tasks = 6;
  const double small = run(cfg, topology, profile, partition).mean_latency_s;
  cfg.num_tasks = 24;
  const double large = run(cfg, topology, profile, partition).mean_latency_s;
  CHECK(large <= small + 0.5);  // no drift as the run grows
}

TEST_CASE("compare replays the same arrivals across policies") {
  const ModelProfile profile = build_profile("m", 8, 1.0, 0.2, 64, 2);
  const Topology topology = chain_topology({3.0, 5.0}, {10.0, 10.0});
  SimConfig cfg;
  cfg.lambda = 0.5;
  const auto rows =
      compare(cfg, topology, profile, {"hyperion", "heft", "gpipe"}, {2, 4});
  REQUIRE(rows.size() == 6);
  for (const auto& row : rows) CHECK(row.failed == 0);
}
