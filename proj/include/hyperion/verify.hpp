#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperion/model_profile.hpp"
#include "hyperion/rng.hpp"
#include "hyperion/scheduler.hpp"

// Randomized cross-checks of the solver and scheduler against the
// brute-force oracles. Used by the `verify` subcommand and the acceptance
// suite.

namespace hyperion {

struct RandomInstance {
  PrefixSums sums;
  std::vector<int64_t> caps_milli;
  std::vector<int64_t> mems_mb;
  bool binding_memory = false;
};

// Integer block costs/capacities, T in {2,3,4}, T <= N <= max_blocks. When
// binding_memory is set, per-tier memory is clamped to the footprint of a
// random feasible partition so the memory constraint actually bites while a
// solution still exists.
RandomInstance random_instance(Rng& rng, int max_blocks, bool binding_memory);

// Random tier snapshot with at least one feasible node; workloads and
// computes are continuous so near-ties are measure-zero.
struct RandomDispatchCase {
  std::vector<NodeState> states;
  DispatchRequest request;
};
RandomDispatchCase random_dispatch_case(Rng& rng, int max_nodes);

struct VerifyOptions {
  int partition_instances = 200;
  int max_blocks = 12;
  int monotonicity_instances = 100;
  int monotonicity_pairs = 20;
  int dispatch_cases = 10'000;
  uint64_t seed = 42;
  double epsilon_s = 1e-3;
};

struct VerifyOutcome {
  int partition_checked = 0;
  int partition_mismatches = 0;
  int monotonicity_checked = 0;
  int monotonicity_violations = 0;
  int dispatch_checked = 0;
  int dispatch_mismatches = 0;
  int constraint_violations = 0;
  int complexity_violations = 0;
  std::vector<std::string> failures;  // first few, for diagnostics

  bool ok() const {
    return partition_mismatches == 0 && monotonicity_violations == 0 &&
           dispatch_mismatches == 0 && constraint_violations == 0 &&
           complexity_violations == 0;
  }
};

VerifyOutcome run_verification(const VerifyOptions& options);

}  // namespace hyperion
