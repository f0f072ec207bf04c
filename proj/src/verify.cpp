#include "hyperion/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hyperion/errors.hpp"
#include "hyperion/oracle.hpp"
#include "hyperion/partition.hpp"
#include "hyperion/partitioner.hpp"
#include "hyperion/units.hpp"

namespace hyperion {

namespace {

// Smallest k with width / 2^k <= eps: the iteration budget of the search.
int64_t halving_steps(int64_t width, int64_t eps) {
  int64_t steps = 0;
  while (width > eps) {
    width = (width + 1) / 2;
    ++steps;
  }
  return steps;
}

void note_failure(VerifyOutcome& outcome, const std::string& what) {
  if (outcome.failures.size() < 10) outcome.failures.push_back(what);
}

}  // namespace

RandomInstance random_instance(Rng& rng, int max_blocks, bool binding_memory) {
  RandomInstance inst;
  inst.binding_memory = binding_memory;
  const int tiers = static_cast<int>(rng.next_int(2, 4));
  const int blocks = static_cast<int>(rng.next_int(tiers, std::max(tiers, max_blocks)));

  inst.sums.flops_milli.resize(blocks + 1, 0);
  inst.sums.mem_mb.resize(blocks + 1, 0);
  for (int i = 0; i < blocks; ++i) {
    inst.sums.flops_milli[i + 1] =
        inst.sums.flops_milli[i] + rng.next_int(1, 20) * kMilliPerUnit;
    inst.sums.mem_mb[i + 1] = inst.sums.mem_mb[i] + rng.next_int(1, 8) * kMilliPerUnit;
  }
  for (int j = 0; j < tiers; ++j) {
    inst.caps_milli.push_back(rng.next_int(1, 50) * kMilliPerUnit);
  }

  if (!binding_memory) {
    inst.mems_mb.assign(tiers, inst.sums.total_mem_mb() + kMilliPerUnit);
    return inst;
  }
  // Clamp per-tier memory to the footprint of a random valid partition, so
  // the constraint bites while a feasible solution is guaranteed.
  std::vector<int> splits;
  {
    std::vector<int> candidates;
    for (int n = 1; n < blocks; ++n) candidates.push_back(n);
    for (int pick = 0; pick < tiers - 1; ++pick) {
      const int idx = static_cast<int>(
          rng.next_int(0, static_cast<int64_t>(candidates.size()) - 1));
      splits.push_back(candidates[idx]);
      candidates.erase(candidates.begin() + idx);
    }
    std::sort(splits.begin(), splits.end());
  }
  Partition witness{splits, blocks};
  for (int j = 1; j <= tiers; ++j) {
    auto [first, last] = witness.tier_range(j);
    inst.mems_mb.push_back(inst.sums.mem_between(first, last) +
                           rng.next_int(0, 1) * kMilliPerUnit);
  }
  return inst;
}

RandomDispatchCase random_dispatch_case(Rng& rng, int max_nodes) {
  RandomDispatchCase result;
  const int count = static_cast<int>(rng.next_int(1, max_nodes));
  for (int k = 0; k < count; ++k) {
    NodeState state;
    state.compute_gflops = rng.next_uniform(0.5, 8.0);
    state.mem_capacity_gb = rng.next_uniform(4.0, 32.0);
    state.mem_available_gb = rng.next_uniform(0.0, state.mem_capacity_gb);
    state.available = rng.next_unit() > 0.1;
    state.running_remaining_gflop =
        rng.next_unit() < 0.5 ? 0.0 : rng.next_uniform(0.1, 30.0);
    const int queued = static_cast<int>(rng.next_int(0, 5));
    for (int q = 0; q < queued; ++q) {
      state.wait_queue_gflop.push_back(rng.next_uniform(0.1, 30.0));
    }
    result.states.push_back(std::move(state));
  }
  result.request.workload_gflop = rng.next_uniform(0.5, 40.0);
  result.request.activation_mem_gb = rng.next_uniform(0.0, 2.0);
  result.request.now_s = rng.next_uniform(0.0, 1000.0);
  // Guarantee at least one candidate.
  const int lucky = static_cast<int>(rng.next_int(0, count - 1));
  result.states[lucky].available = true;
  result.states[lucky].mem_available_gb =
      std::max(result.states[lucky].mem_available_gb,
               result.request.activation_mem_gb + 0.1);
  return result;
}

VerifyOutcome run_verification(const VerifyOptions& options) {
  VerifyOutcome outcome;
  const int64_t eps_us = std::max<int64_t>(1, to_micros(options.epsilon_s));

  // Solver vs exhaustive oracle, plus constraint and complexity audits.
  {
    Rng rng(options.seed);
    for (int i = 0; i < options.partition_instances; ++i) {
      const bool binding = i % 10 < 3;  // 30% with binding memory
      RandomInstance inst = random_instance(rng, options.max_blocks, binding);
      const int tiers = static_cast<int>(inst.caps_milli.size());
      const int blocks = inst.sums.num_blocks();

      PartitionSolution solution;
      OracleResult oracle;
      try {
        solution = solve(inst.sums, inst.caps_milli, inst.mems_mb, options.epsilon_s);
        oracle = brute_force_optimal(inst.sums, inst.caps_milli, inst.mems_mb);
      } catch (const std::exception& e) {
        ++outcome.partition_mismatches;
        note_failure(outcome, std::string("instance threw: ") + e.what());
        continue;
      }
      ++outcome.partition_checked;

      if (std::abs(solution.tau_star_s - oracle.best_tau_s) > options.epsilon_s) {
        ++outcome.partition_mismatches;
        std::ostringstream msg;
        msg << "instance " << i << ": solver tau " << solution.tau_star_s
            << " vs oracle " << oracle.best_tau_s;
        note_failure(outcome, msg.str());
      }
      try {
        validate_partition(solution.partition);
        if (!satisfies_memory(solution.partition, inst.sums, inst.mems_mb)) {
          ++outcome.constraint_violations;
          note_failure(outcome, "instance " + std::to_string(i) + ": memory violated");
        }
      } catch (const ValidationError& e) {
        ++outcome.constraint_violations;
        note_failure(outcome, std::string("invalid partition: ") + e.what());
      }
      const int64_t inner_cap =
          static_cast<int64_t>(tiers) * blocks * blocks;
      if (solution.stats.max_inner_iterations > inner_cap) {
        ++outcome.complexity_violations;
        note_failure(outcome, "instance " + std::to_string(i) + ": inner loop over T*N^2");
      }
      const int64_t call_cap =
          halving_steps(solution.stats.initial_width_us, eps_us) + 1;
      if (solution.stats.binary_search_iterations > call_cap) {
        ++outcome.complexity_violations;
        note_failure(outcome,
                     "instance " + std::to_string(i) + ": search call count over bound");
      }
    }
  }

  // Feasibility monotonicity in tau.
  {
    Rng rng(options.seed + 1);
    for (int i = 0; i < options.monotonicity_instances; ++i) {
      RandomInstance inst = random_instance(rng, options.max_blocks, i % 2 == 0);
      const SearchBounds bounds = search_bounds(inst.sums, inst.caps_milli, false);
      for (int p = 0; p < options.monotonicity_pairs; ++p) {
        int64_t a = rng.next_int(0, bounds.hi_us);
        int64_t b = rng.next_int(0, bounds.hi_us);
        if (a > b) std::swap(a, b);
        const bool feasible_low =
            check_feasible(a, inst.sums, inst.caps_milli, inst.mems_mb).feasible;
        const bool feasible_high =
            check_feasible(b, inst.sums, inst.caps_milli, inst.mems_mb).feasible;
        ++outcome.monotonicity_checked;
        if (feasible_low && !feasible_high) {
          ++outcome.monotonicity_violations;
          note_failure(outcome, "monotonicity violated on instance " + std::to_string(i));
        }
      }
    }
  }

  // Dispatcher vs exhaustive evaluation, with the linear-scan budget.
  {
    Rng rng(options.seed + 2);
    for (int i = 0; i < options.dispatch_cases; ++i) {
      RandomDispatchCase c = random_dispatch_case(rng, 16);
      DispatchStats stats;
      DispatchDecision decision;
      int expected;
      try {
        decision = select_node(c.states, c.request, &stats);
        expected = brute_force_dispatch(c.states, c.request.workload_gflop,
                                        c.request.activation_mem_gb,
                                        c.request.now_s);
      } catch (const std::exception& e) {
        ++outcome.dispatch_mismatches;
        note_failure(outcome, std::string("dispatch case threw: ") + e.what());
        continue;
      }
      ++outcome.dispatch_checked;
      if (decision.node != expected) {
        ++outcome.dispatch_mismatches;
        note_failure(outcome, "dispatch case " + std::to_string(i) + ": node " +
                                  std::to_string(decision.node) + " vs oracle " +
                                  std::to_string(expected));
      }
      if (stats.comparisons > static_cast<int>(c.states.size())) {
        ++outcome.complexity_violations;
        note_failure(outcome, "dispatch case " + std::to_string(i) +
                                  ": more comparisons than nodes");
      }
    }
  }

  return outcome;
}

}  // namespace hyperion
