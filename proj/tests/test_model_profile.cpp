#include <doctest.h>

#include "hyperion/errors.hpp"
#include "hyperion/model_profile.hpp"
#include "hyperion/rng.hpp"
#include "hyperion/units.hpp"

using namespace hyperion;

TEST_CASE("build_profile makes uniform block chains") {
  const ModelProfile llama = build_profile("llama3", 32, 0.5, 0.5, 4096, 2);
  CHECK(llama.num_blocks() == 32);
  CHECK(llama.hidden_dim == 4096);

  const ModelProfile phi = build_profile("phi3", 40, 0.7, 1.0, 5120, 2);
  CHECK(phi.num_blocks() == 40);

  const ModelProfile single = build_profile("x", 1, 1.0, 1.0, 8, 2);
  CHECK(single.num_blocks() == 1);
}

TEST_CASE("build_profile rejects bad inputs") {
  CHECK_THROWS_AS(build_profile("x", 0, 1.0, 1.0, 8, 2), ValidationError);
  CHECK_THROWS_AS(build_profile("x", 2, -1.0, 1.0, 8, 2), ValidationError);
  CHECK_THROWS_AS(build_profile("x", 2, 1.0, 0.0, 8, 2), ValidationError);
  CHECK_THROWS_AS(build_profile("x", 2, 1.0, 1.0, 0, 2), ValidationError);
}

TEST_CASE("prefix sums cumulate block costs") {
  ModelProfile profile;
  profile.name = "p";
  profile.hidden_dim = 8;
  profile.blocks = {{1.0, 1.0}, {2.0, 1.0}, {3.0, 1.0}};
  const PrefixSums sums = prefix_sums(profile);
  CHECK(sums.flops_milli == std::vector<int64_t>{0, 1000, 3000, 6000});
  CHECK(sums.total_flops_milli() == 6000);

  const ModelProfile uniform = build_profile("u", 4, 1.0, 1.0, 8, 2);
  const PrefixSums s4 = prefix_sums(uniform);
  CHECK(s4.flops_between(1, 3) == 2000);  // blocks 2..3
}

TEST_CASE("interval queries equal direct sums on random profiles") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = static_cast<int>(rng.next_int(1, 12));
    ModelProfile profile;
    profile.name = "r";
    profile.hidden_dim = 16;
    std::vector<int64_t> f_milli, m_milli;
    for (int i = 0; i < n; ++i) {
      const int64_t f = rng.next_int(1, 5000);
      const int64_t m = rng.next_int(1, 3000);
      f_milli.push_back(f);
      m_milli.push_back(m);
      profile.blocks.push_back({from_milli(f), from_milli(m)});
    }
    const PrefixSums sums = prefix_sums(profile);
    const int k = static_cast<int>(rng.next_int(0, n));
    const int hi = static_cast<int>(rng.next_int(k, n));
    int64_t direct_f = 0, direct_m = 0;
    for (int i = k; i < hi; ++i) {
      direct_f += f_milli[i];
      direct_m += m_milli[i];
    }
    REQUIRE(sums.flops_between(k, hi) == direct_f);
    REQUIRE(sums.mem_between(k, hi) == direct_m);
  }
}

TEST_CASE("activation payload size") {
  const ModelProfile profile = build_profile("llama3", 32, 0.5, 0.5, 4096, 2);
  CHECK(activation_bytes(1, 64, profile) == 524288);
  CHECK(activation_bytes(1, 1, profile) == 8192);

  const ModelProfile tiny = build_profile("t", 1, 1.0, 1.0, 1, 1);
  CHECK(activation_bytes(1, 1, tiny) == 1);
  CHECK_THROWS_AS(activation_bytes(0, 1, tiny), ValidationError);
}
