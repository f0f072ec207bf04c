#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hyperion/model_profile.hpp"
#include "hyperion/partitioner.hpp"
#include "hyperion/scheduler.hpp"
#include "hyperion/simulator.hpp"
#include "hyperion/topology.hpp"

namespace hyperion {

// Stamped into every output file. The timestamp is only filled in when
// HYPERION_TIMESTAMP is set in the environment, so outputs are byte-identical
// across repeated runs by default.
struct RunManifest {
  std::vector<std::string> config_paths;
  uint64_t seed = 0;
  std::string tool_version;
  std::vector<std::string> policies;
  std::string timestamp;

  static RunManifest make(std::vector<std::string> config_paths, uint64_t seed,
                          std::vector<std::string> policies);
};

using ordered_json = nlohmann::ordered_json;

// Parsers throw ValidationError with every problem listed, each prefixed by
// a JSON-pointer-style location.
ModelProfile profile_from_json(const ordered_json& doc);
ModelProfile load_profile(const std::string& path);
ordered_json profile_to_json(const ModelProfile& profile);

Topology topology_from_json(const ordered_json& doc);
Topology load_topology(const std::string& path);
ordered_json topology_to_json(const Topology& topology);

// Tier snapshot for the `dispatch` subcommand:
// {"now_s": t, "nodes": [{compute_gflops, mem_capacity_gb, mem_available_gb,
//  running_remaining_gflop, wait_queue_gflop: [...], available}]}.
std::vector<NodeState> tier_state_from_json(const ordered_json& doc,
                                            double* now_s);

ordered_json manifest_to_json(const RunManifest& manifest);
ordered_json partition_to_json(const Partition& partition,
                               const PartitionSolution* solution,
                               const PrefixSums& sums,
                               const std::vector<int64_t>& caps_milli,
                               const RunManifest& manifest);
ordered_json report_to_json(const SimReport& report, const RunManifest& manifest,
                            bool include_timeline = true);

// Flat comparison table, numbers at 6 significant digits. One row per
// (policy, tasks, node).
std::string compare_to_csv(const std::vector<CompareRow>& rows);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace hyperion
