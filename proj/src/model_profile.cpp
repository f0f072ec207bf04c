#include "hyperion/model_profile.hpp"

#include <cmath>

#include "hyperion/errors.hpp"
#include "hyperion/units.hpp"

namespace hyperion {

void validate(const ModelProfile& profile) {
  if (profile.blocks.empty()) {
    throw ValidationError("profile '" + profile.name + "': needs at least one block");
  }
  if (profile.hidden_dim <= 0) {
    throw ValidationError("profile '" + profile.name + "': hidden_dim must be > 0");
  }
  if (profile.bytes_per_element <= 0) {
    throw ValidationError("profile '" + profile.name + "': bytes_per_element must be > 0");
  }
  for (size_t i = 0; i < profile.blocks.size(); ++i) {
    const auto& b = profile.blocks[i];
    if (!(b.flops_gflop > 0.0) || !std::isfinite(b.flops_gflop)) {
      throw ValidationError("profile '" + profile.name + "': block " +
                            std::to_string(i) + " flops must be finite and > 0");
    }
    if (!(b.memory_gb > 0.0) || !std::isfinite(b.memory_gb)) {
      throw ValidationError("profile '" + profile.name + "': block " +
                            std::to_string(i) + " memory must be finite and > 0");
    }
  }
  if (profile.prefill_flops_per_block &&
      !(*profile.prefill_flops_per_block > 0.0)) {
    throw ValidationError("profile '" + profile.name +
                          "': prefill_flops_per_block must be > 0");
  }
}

ModelProfile build_profile(const std::string& name, int num_blocks,
                           double per_block_flops_gflop,
                           double per_block_memory_gb, int hidden_dim,
                           int bytes_per_element) {
  if (num_blocks < 1) {
    throw ValidationError("build_profile: num_blocks must be >= 1");
  }
  ModelProfile profile;
  profile.name = name;
  profile.blocks.assign(static_cast<size_t>(num_blocks),
                        BlockCost{per_block_flops_gflop, per_block_memory_gb});
  profile.hidden_dim = hidden_dim;
  profile.bytes_per_element = bytes_per_element;
  validate(profile);
  return profile;
}

PrefixSums prefix_sums(const ModelProfile& profile) {
  validate(profile);
  const int n = profile.num_blocks();
  PrefixSums sums;
  sums.flops_milli.resize(n + 1, 0);
  sums.mem_mb.resize(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    sums.flops_milli[i + 1] = sums.flops_milli[i] + to_milli(profile.blocks[i].flops_gflop);
    sums.mem_mb[i + 1] = sums.mem_mb[i] + to_milli(profile.blocks[i].memory_gb);
  }
  return sums;
}

int64_t activation_bytes(int batch, int seq_len, const ModelProfile& profile) {
  if (batch < 1 || seq_len < 1) {
    throw ValidationError("activation_bytes: batch and seq_len must be >= 1");
  }
  return static_cast<int64_t>(batch) * seq_len * profile.hidden_dim *
         profile.bytes_per_element;
}

}  // namespace hyperion
