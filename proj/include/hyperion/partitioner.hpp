#pragma once

#include <cstdint>
#include <vector>

#include "hyperion/model_profile.hpp"
#include "hyperion/partition.hpp"

namespace hyperion {

// Exact per-stage load as the fraction (milli-GFLOP / milli-GFLOP-per-s).
// Kept rational so load comparisons never depend on float rounding.
struct StageLoad {
  int64_t flops_milli = 0;
  int64_t cap_milli = 1;

  double seconds() const {
    return static_cast<double>(flops_milli) / static_cast<double>(cap_milli);
  }
};

// -1 / 0 / +1 comparison of a/b vs c/d by cross multiplication.
int compare_loads(const StageLoad& a, const StageLoad& b);

// Boolean DP table over (tier 0..T, blocks 0..N) plus the predecessor table
// used to reconstruct a witness partition. pred[j][n] records the smallest
// split k that made dp[j][n] true (the inner scan breaks at the first hit).
struct FeasibilityTable {
  int tiers = 0;
  int blocks = 0;
  std::vector<uint8_t> dp;   // (tiers+1) x (blocks+1)
  std::vector<int> pred;     // same shape, -1 where unset
  int64_t inner_iterations = 0;

  bool at(int tier, int n) const { return dp[tier * (blocks + 1) + n] != 0; }
  int pred_at(int tier, int n) const { return pred[tier * (blocks + 1) + n]; }
};

struct FeasibilityResult {
  bool feasible = false;
  FeasibilityTable table;
};

// Decision problem: can blocks 1..N be split across the T tiers so that every
// stage finishes within tau and fits its tier's memory? tau_us < 0 means no
// latency bound (memory-only check). T > N yields feasible=false, not an
// error. The latency test compares f * 1e6 <= tau_us * C in 128-bit integers.
FeasibilityResult check_feasible(int64_t tau_us, const PrefixSums& sums,
                                 const std::vector<int64_t>& caps_milli,
                                 const std::vector<int64_t>& mems_mb);

// Walks the predecessor table back from (T, N). Requires dp[T][N] true.
Partition backtrack(const FeasibilityTable& table);

// max_j (f-share of tier j) / C_j, as exact fraction and in seconds.
StageLoad bottleneck_load(const Partition& partition, const PrefixSums& sums,
                          const std::vector<int64_t>& caps_milli);
double bottleneck_latency(const Partition& partition, const PrefixSums& sums,
                          const std::vector<int64_t>& caps_milli);

struct SearchBounds {
  int64_t lo_us = 0;
  int64_t hi_us = 0;
};

// lo = 0 (provably safe floor) or, when tight_lower is set, the heaviest
// single block on the fastest tier. hi = the whole model on the slowest tier,
// which bounds the bottleneck of any partition.
SearchBounds search_bounds(const PrefixSums& sums,
                           const std::vector<int64_t>& caps_milli,
                           bool tight_lower = false);

struct SolveStats {
  int feasibility_calls = 0;
  int binary_search_iterations = 0;
  int64_t max_inner_iterations = 0;  // worst single feasibility call
  int64_t initial_width_us = 0;
};

struct PartitionSolution {
  Partition partition;
  int64_t tau_star_us = 0;
  double tau_star_s = 0.0;
  SolveStats stats;
};

// Binary search over the bottleneck target with the DP feasibility check.
// Throws InfeasibleMemoryError (naming the first stuck tier) when not even an
// unbounded-latency partition exists. The returned tau_star is the final
// upper bound and is within epsilon of the true optimum.
PartitionSolution solve(const PrefixSums& sums,
                        const std::vector<int64_t>& caps_milli,
                        const std::vector<int64_t>& mems_mb,
                        double epsilon_s = 1e-3, bool tight_lower = false);

}  // namespace hyperion
