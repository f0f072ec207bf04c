#include "hyperion/partitioner.hpp"

#include <algorithm>
#include <string>

#include "hyperion/errors.hpp"
#include "hyperion/units.hpp"

namespace hyperion {

namespace {

using int128 = __int128;

// Exact test of  (f_milli / 1000) / (cap_milli / 1000) <= tau_us * 1e-6,
// i.e. f_milli * 1e6 <= tau_us * cap_milli, in 128-bit to dodge overflow.
bool within_latency(int64_t flops_milli, int64_t cap_milli, int64_t tau_us) {
  if (tau_us < 0) return true;  // unbounded (memory-only check)
  return static_cast<int128>(flops_milli) * kMicrosPerSecond <=
         static_cast<int128>(tau_us) * cap_milli;
}

}  // namespace

int compare_loads(const StageLoad& a, const StageLoad& b) {
  const int128 lhs = static_cast<int128>(a.flops_milli) * b.cap_milli;
  const int128 rhs = static_cast<int128>(b.flops_milli) * a.cap_milli;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

FeasibilityResult check_feasible(int64_t tau_us, const PrefixSums& sums,
                                 const std::vector<int64_t>& caps_milli,
                                 const std::vector<int64_t>& mems_mb) {
  const int tiers = static_cast<int>(caps_milli.size());
  const int blocks = sums.num_blocks();

  FeasibilityResult result;
  auto& table = result.table;
  table.tiers = tiers;
  table.blocks = blocks;
  table.dp.assign(static_cast<size_t>(tiers + 1) * (blocks + 1), 0);
  table.pred.assign(table.dp.size(), -1);
  const int stride = blocks + 1;
  table.dp[0] = 1;  // dp[0][0]

  for (int j = 1; j <= tiers; ++j) {
    for (int n = j; n <= blocks; ++n) {
      for (int k = j - 1; k < n; ++k) {
        ++table.inner_iterations;
        if (!table.dp[(j - 1) * stride + k]) continue;
        if (within_latency(sums.flops_between(k, n), caps_milli[j - 1], tau_us) &&
            sums.mem_between(k, n) <= mems_mb[j - 1]) {
          table.dp[j * stride + n] = 1;
          table.pred[j * stride + n] = k;
          break;  // any witness suffices for the decision problem
        }
      }
    }
  }
  result.feasible = tiers <= blocks && table.at(tiers, blocks);
  return result;
}

Partition backtrack(const FeasibilityTable& table) {
  if (!table.at(table.tiers, table.blocks)) {
    throw ValidationError("backtrack: dp[T][N] is false, nothing to reconstruct");
  }
  Partition partition;
  partition.num_blocks = table.blocks;
  partition.splits.assign(table.tiers - 1, 0);
  int n = table.blocks;
  for (int j = table.tiers; j >= 2; --j) {
    const int k = table.pred_at(j, n);
    partition.splits[j - 2] = k;
    n = k;
  }
  validate_partition(partition);
  return partition;
}

StageLoad bottleneck_load(const Partition& partition, const PrefixSums& sums,
                          const std::vector<int64_t>& caps_milli) {
  validate_partition(partition);
  if (static_cast<int>(caps_milli.size()) != partition.num_tiers()) {
    throw ValidationError("bottleneck_load: capacity count does not match tiers");
  }
  StageLoad worst{0, 1};
  for (int j = 1; j <= partition.num_tiers(); ++j) {
    auto [first, last] = partition.tier_range(j);
    StageLoad load{sums.flops_between(first, last), caps_milli[j - 1]};
    if (compare_loads(load, worst) > 0) worst = load;
  }
  return worst;
}

double bottleneck_latency(const Partition& partition, const PrefixSums& sums,
                          const std::vector<int64_t>& caps_milli) {
  return bottleneck_load(partition, sums, caps_milli).seconds();
}

SearchBounds search_bounds(const PrefixSums& sums,
                           const std::vector<int64_t>& caps_milli,
                           bool tight_lower) {
  SearchBounds bounds;
  const int64_t min_cap = *std::min_element(caps_milli.begin(), caps_milli.end());
  const int128 total = static_cast<int128>(sums.total_flops_milli()) * kMicrosPerSecond;
  bounds.hi_us = static_cast<int64_t>((total + min_cap - 1) / min_cap);

  bounds.lo_us = 0;
  if (tight_lower) {
    // No stage beats its heaviest single block on the fastest tier.
    const int64_t max_cap = *std::max_element(caps_milli.begin(), caps_milli.end());
    int64_t max_block = 0;
    for (int i = 1; i <= sums.num_blocks(); ++i) {
      max_block = std::max(max_block, sums.flops_between(i - 1, i));
    }
    bounds.lo_us = static_cast<int64_t>(
        static_cast<int128>(max_block) * kMicrosPerSecond / max_cap);
  }
  return bounds;
}

PartitionSolution solve(const PrefixSums& sums,
                        const std::vector<int64_t>& caps_milli,
                        const std::vector<int64_t>& mems_mb,
                        double epsilon_s, bool tight_lower) {
  if (!(epsilon_s > 0.0)) {
    throw ValidationError("solve: epsilon must be > 0");
  }
  if (caps_milli.size() != mems_mb.size() || caps_milli.empty()) {
    throw ValidationError("solve: capacity and memory lists must match and be nonempty");
  }
  const int tiers = static_cast<int>(caps_milli.size());
  const int blocks = sums.num_blocks();

  PartitionSolution solution;
  auto& stats = solution.stats;

  // Memory pre-check with unbounded latency separates "does not fit at all"
  // from "latency target too tight".
  FeasibilityResult precheck = check_feasible(-1, sums, caps_milli, mems_mb);
  ++stats.feasibility_calls;
  stats.max_inner_iterations =
      std::max(stats.max_inner_iterations, precheck.table.inner_iterations);
  if (!precheck.feasible) {
    const int stride = blocks + 1;
    int first_stuck = tiers;
    for (int j = 1; j <= tiers; ++j) {
      bool any = false;
      for (int n = 0; n <= blocks && !any; ++n) {
        any = precheck.table.dp[j * stride + n] != 0;
      }
      if (!any) {
        first_stuck = j;
        break;
      }
    }
    throw InfeasibleMemoryError(
        first_stuck, "no memory-feasible partition: no prefix of blocks fits "
                     "through tier " + std::to_string(first_stuck));
  }

  const int64_t eps_us = std::max<int64_t>(1, to_micros(epsilon_s));
  SearchBounds bounds = search_bounds(sums, caps_milli, tight_lower);
  stats.initial_width_us = bounds.hi_us - bounds.lo_us;

  // The coarsest witness: guaranteed within the initial upper bound.
  solution.partition = backtrack(precheck.table);

  int64_t lo = bounds.lo_us;
  int64_t hi = bounds.hi_us;
  while (hi - lo > eps_us) {
    const int64_t mid = lo + (hi - lo) / 2;
    FeasibilityResult r = check_feasible(mid, sums, caps_milli, mems_mb);
    ++stats.feasibility_calls;
    ++stats.binary_search_iterations;
    stats.max_inner_iterations =
        std::max(stats.max_inner_iterations, r.table.inner_iterations);
    if (r.feasible) {
      hi = mid;
      solution.partition = backtrack(r.table);
    } else {
      lo = mid;
    }
  }

  solution.tau_star_us = hi;
  solution.tau_star_s = from_micros(hi);
  return solution;
}

}  // namespace hyperion
