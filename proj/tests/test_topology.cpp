#include <doctest.h>

#include "hyperion/errors.hpp"
#include "hyperion/rng.hpp"
#include "hyperion/topology.hpp"

using namespace hyperion;

namespace {

Topology two_gbps_links() {
  Topology topology;
  topology.tiers.resize(3);
  for (auto& tier : topology.tiers) tier.nodes.push_back({10.0, 8.0, 1.0});
  topology.links.resize(2);
  topology.links[0].rate_bps = 1e9;
  topology.links[1].rate_bps = 1e9;
  return topology;
}

}  // namespace

TEST_CASE("effective capacity is the per-tier max") {
  TierSpec homogeneous;
  homogeneous.nodes = {{67.0, 8.0, 1.0}, {67.0, 8.0, 1.0}, {67.0, 8.0, 1.0}};
  auto cap = effective_capacity(homogeneous);
  CHECK(cap.compute_gflops == doctest::Approx(67.0));
  CHECK(cap.memory_gb == doctest::Approx(8.0));

  TierSpec mixed;
  mixed.nodes = {{200.0, 32.0, 1.0}, {157.0, 16.0, 1.0}};
  cap = effective_capacity(mixed);
  CHECK(cap.compute_gflops == doctest::Approx(200.0));
  CHECK(cap.memory_gb == doctest::Approx(32.0));

  TierSpec single;
  single.nodes = {{3.0, 5.0, 1.0}};
  cap = effective_capacity(single);
  CHECK(cap.compute_gflops == doctest::Approx(3.0));
  CHECK(cap.memory_gb == doctest::Approx(5.0));

  CHECK_THROWS_AS(effective_capacity(TierSpec{}), ValidationError);
}

TEST_CASE("effective capacity equals brute-force max on random tiers") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    TierSpec tier;
    double max_c = 0.0, max_m = 0.0;
    const int count = static_cast<int>(rng.next_int(1, 8));
    for (int k = 0; k < count; ++k) {
      NodeSpec node{rng.next_uniform(1.0, 100.0), rng.next_uniform(1.0, 64.0),
                    rng.next_uniform(0.5, 1.0)};
      max_c = std::max(max_c, node.effective_compute());
      max_m = std::max(max_m, node.memory_gb);
      tier.nodes.push_back(node);
    }
    const auto cap = effective_capacity(tier);
    REQUIRE(cap.compute_gflops == doctest::Approx(max_c));
    REQUIRE(cap.memory_gb == doctest::Approx(max_m));
  }
}

TEST_CASE("link rate: direct and Shannon forms") {
  LinkSpec direct;
  direct.rate_bps = 1e9;
  CHECK(link_rate(direct) == doctest::Approx(1e9));

  LinkSpec shannon;
  shannon.bandwidth_hz = 20e6;
  shannon.sinr = 255.0;  // log2(256) = 8
  CHECK(link_rate(shannon) == doctest::Approx(160e6));

  LinkSpec dead;
  dead.bandwidth_hz = 1.0;
  dead.sinr = 0.0;
  CHECK_THROWS_AS(link_rate(dead), ValidationError);
  CHECK_THROWS_AS(link_rate(LinkSpec{}), ValidationError);
}

TEST_CASE("transfer latency") {
  LinkSpec gbps;
  gbps.rate_bps = 1e9;
  CHECK(transfer_latency(gbps, 1'000'000) == doctest::Approx(0.008));

  LinkSpec mbps;
  mbps.rate_bps = 1e8;
  CHECK(transfer_latency(mbps, 524288) == doctest::Approx(0.04194304));
  CHECK(transfer_latency(mbps, 0) == 0.0);

  // Linear in payload, exactly.
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    LinkSpec link;
    link.rate_bps = rng.next_uniform(1e6, 1e10);
    const int64_t payload = rng.next_int(1, 1'000'000);
    REQUIRE(transfer_latency(link, 2 * payload) ==
            2.0 * transfer_latency(link, payload));
  }
}

TEST_CASE("total communication latency sums the links") {
  Topology single_tier;
  single_tier.tiers.resize(1);
  single_tier.tiers[0].nodes.push_back({1.0, 1.0, 1.0});
  CHECK(total_comm_latency(single_tier, 123456) == 0.0);

  CHECK(total_comm_latency(two_gbps_links(), 1'000'000) == doctest::Approx(0.016));

  Topology hundred = two_gbps_links();
  hundred.links[0].rate_bps = 1e8;
  hundred.links[1].rate_bps = 1e8;
  CHECK(total_comm_latency(hundred, 524288) == doctest::Approx(0.08388608));
}

TEST_CASE("topology validation") {
  Topology ok = two_gbps_links();
  validate(ok);

  Topology missing_link = ok;
  missing_link.links.pop_back();
  CHECK_THROWS_AS(validate(missing_link), ValidationError);

  Topology bad_node = ok;
  bad_node.tiers[1].nodes[0].compute_gflops = -1.0;
  CHECK_THROWS_AS(validate(bad_node), ValidationError);

  Topology empty_tier = ok;
  empty_tier.tiers[2].nodes.clear();
  CHECK_THROWS_AS(validate(empty_tier), ValidationError);
}

TEST_CASE("efficiency scales the datasheet throughput") {
  TierSpec tier;
  tier.nodes = {{100.0, 8.0, 0.5}};
  CHECK(effective_capacity(tier).compute_gflops == doctest::Approx(50.0));
}
