#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hyperion {

// Per-block cost of one decoder block: compute for a single forward pass of
// one token, and resident memory (weights plus working set).
struct BlockCost {
  double flops_gflop = 0.0;
  double memory_gb = 0.0;
};

// An LLM abstracted as an ordered chain of decoder blocks. Block order is
// execution order; there is no tensor math here, only costs.
struct ModelProfile {
  std::string name;
  std::vector<BlockCost> blocks;
  int hidden_dim = 0;
  int bytes_per_element = 2;
  // Total GFLOP of the prompt pass per block. When unset, the prompt pass
  // costs seq_len times the per-token block cost.
  std::optional<double> prefill_flops_per_block;

  int num_blocks() const { return static_cast<int>(blocks.size()); }
};

// Cumulative block costs with s[0] = 0, held in exact integer units
// (milli-GFLOP / MB) so interval sums never drift.
struct PrefixSums {
  std::vector<int64_t> flops_milli;  // length N+1
  std::vector<int64_t> mem_mb;       // length N+1

  int num_blocks() const { return static_cast<int>(flops_milli.size()) - 1; }
  // Sum over blocks k+1..n (0 <= k <= n <= N).
  int64_t flops_between(int k, int n) const { return flops_milli[n] - flops_milli[k]; }
  int64_t mem_between(int k, int n) const { return mem_mb[n] - mem_mb[k]; }
  int64_t total_flops_milli() const { return flops_milli.back(); }
  int64_t total_mem_mb() const { return mem_mb.back(); }
};

// Throws ValidationError on empty profiles or nonpositive costs/parameters.
void validate(const ModelProfile& profile);

// Uniform-block construction; heterogeneous profiles are built by filling
// ModelProfile::blocks directly.
ModelProfile build_profile(const std::string& name, int num_blocks,
                           double per_block_flops_gflop,
                           double per_block_memory_gb, int hidden_dim,
                           int bytes_per_element);

PrefixSums prefix_sums(const ModelProfile& profile);

// Size of the activation tensor handed between adjacent pipeline stages:
// batch * seq_len * hidden_dim * bytes_per_element. Independent of how the
// model is partitioned.
int64_t activation_bytes(int batch, int seq_len, const ModelProfile& profile);

}  // namespace hyperion
