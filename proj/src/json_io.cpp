#include "hyperion/json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "hyperion/errors.hpp"
#include "hyperion/units.hpp"

namespace hyperion {

namespace {

std::string fmt6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

ordered_json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open file: " + path);
  }
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// Collects problems so a bad config reports everything at once.
struct ErrorList {
  std::vector<std::string> errors;

  void add(const std::string& where, const std::string& what) {
    errors.push_back(where + ": " + what);
  }
  void raise_if_any(const std::string& context) {
    if (errors.empty()) return;
    std::ostringstream out;
    out << context << ": " << errors.size() << " validation error(s)";
    for (const auto& e : errors) out << "\n  " << e;
    throw ValidationError(out.str());
  }
};

double require_number(const ordered_json& doc, const std::string& ptr,
                      const char* key, ErrorList& errors) {
  if (!doc.contains(key) || !doc[key].is_number()) {
    errors.add(ptr + "/" + key, "missing or not a number");
    return 0.0;
  }
  return doc[key].get<double>();
}

}  // namespace

RunManifest RunManifest::make(std::vector<std::string> config_paths,
                              uint64_t seed,
                              std::vector<std::string> policies) {
  RunManifest manifest;
  manifest.config_paths = std::move(config_paths);
  manifest.seed = seed;
  manifest.tool_version = HYPERION_VERSION;
  manifest.policies = std::move(policies);
  if (std::getenv("HYPERION_TIMESTAMP") != nullptr) {
    char buf[32];
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    manifest.timestamp = buf;
  }
  return manifest;
}

ModelProfile profile_from_json(const ordered_json& doc) {
  ErrorList errors;
  ModelProfile profile;
  if (doc.contains("name") && doc["name"].is_string()) {
    profile.name = doc["name"].get<std::string>();
  } else {
    errors.add("/name", "missing or not a string");
  }
  if (!doc.contains("blocks") || !doc["blocks"].is_array() || doc["blocks"].empty()) {
    errors.add("/blocks", "missing, not an array, or empty");
  } else {
    for (size_t i = 0; i < doc["blocks"].size(); ++i) {
      const std::string ptr = "/blocks/" + std::to_string(i);
      const auto& b = doc["blocks"][i];
      BlockCost cost;
      cost.flops_gflop = require_number(b, ptr, "flops_gflop", errors);
      cost.memory_gb = require_number(b, ptr, "memory_gb", errors);
      if (cost.flops_gflop <= 0.0) errors.add(ptr + "/flops_gflop", "must be > 0");
      if (cost.memory_gb <= 0.0) errors.add(ptr + "/memory_gb", "must be > 0");
      profile.blocks.push_back(cost);
    }
  }
  profile.hidden_dim = static_cast<int>(require_number(doc, "", "hidden_dim", errors));
  profile.bytes_per_element =
      static_cast<int>(require_number(doc, "", "bytes_per_element", errors));
  if (profile.hidden_dim <= 0) errors.add("/hidden_dim", "must be > 0");
  if (profile.bytes_per_element <= 0) errors.add("/bytes_per_element", "must be > 0");
  if (doc.contains("prefill_flops_per_block")) {
    profile.prefill_flops_per_block = doc["prefill_flops_per_block"].get<double>();
  }
  errors.raise_if_any("model profile");
  validate(profile);
  return profile;
}

ModelProfile load_profile(const std::string& path) {
  return profile_from_json(read_json_file(path));
}

ordered_json profile_to_json(const ModelProfile& profile) {
  ordered_json doc;
  doc["name"] = profile.name;
  doc["blocks"] = ordered_json::array();
  for (const auto& b : profile.blocks) {
    doc["blocks"].push_back({{"flops_gflop", b.flops_gflop}, {"memory_gb", b.memory_gb}});
  }
  doc["hidden_dim"] = profile.hidden_dim;
  doc["bytes_per_element"] = profile.bytes_per_element;
  if (profile.prefill_flops_per_block) {
    doc["prefill_flops_per_block"] = *profile.prefill_flops_per_block;
  }
  return doc;
}

Topology topology_from_json(const ordered_json& doc) {
  ErrorList errors;
  Topology topology;
  if (!doc.contains("tiers") || !doc["tiers"].is_array() || doc["tiers"].empty()) {
    errors.add("/tiers", "missing, not an array, or empty");
  } else {
    for (size_t j = 0; j < doc["tiers"].size(); ++j) {
      const std::string tier_ptr = "/tiers/" + std::to_string(j);
      const auto& tier_doc = doc["tiers"][j];
      TierSpec tier;
      if (!tier_doc.contains("nodes") || !tier_doc["nodes"].is_array() ||
          tier_doc["nodes"].empty()) {
        errors.add(tier_ptr + "/nodes", "missing, not an array, or empty");
      } else {
        for (size_t k = 0; k < tier_doc["nodes"].size(); ++k) {
          const std::string ptr = tier_ptr + "/nodes/" + std::to_string(k);
          const auto& node_doc = tier_doc["nodes"][k];
          NodeSpec node;
          node.compute_gflops = require_number(node_doc, ptr, "compute_gflops", errors);
          node.memory_gb = require_number(node_doc, ptr, "memory_gb", errors);
          if (node_doc.contains("efficiency")) {
            node.efficiency = node_doc["efficiency"].get<double>();
          }
          if (node.compute_gflops <= 0.0) errors.add(ptr + "/compute_gflops", "must be > 0");
          if (node.memory_gb <= 0.0) errors.add(ptr + "/memory_gb", "must be > 0");
          if (node.efficiency <= 0.0) errors.add(ptr + "/efficiency", "must be > 0");
          tier.nodes.push_back(node);
        }
      }
      topology.tiers.push_back(std::move(tier));
    }
  }
  if (!doc.contains("links") || !doc["links"].is_array()) {
    errors.add("/links", "missing or not an array");
  } else {
    for (size_t i = 0; i < doc["links"].size(); ++i) {
      const std::string ptr = "/links/" + std::to_string(i);
      const auto& link_doc = doc["links"][i];
      LinkSpec link;
      if (link_doc.contains("rate_bps")) {
        link.rate_bps = link_doc["rate_bps"].get<double>();
      } else if (link_doc.contains("bandwidth_hz") && link_doc.contains("sinr")) {
        link.bandwidth_hz = link_doc["bandwidth_hz"].get<double>();
        link.sinr = link_doc["sinr"].get<double>();
      } else {
        errors.add(ptr, "needs rate_bps or (bandwidth_hz, sinr)");
      }
      topology.links.push_back(link);
    }
    if (!topology.tiers.empty() &&
        doc["links"].size() + 1 != topology.tiers.size()) {
      errors.add("/links", "expected " + std::to_string(topology.tiers.size() - 1) +
                               " links (tiers - 1), got " +
                               std::to_string(doc["links"].size()));
    }
  }
  errors.raise_if_any("topology");
  validate(topology);
  return topology;
}

Topology load_topology(const std::string& path) {
  return topology_from_json(read_json_file(path));
}

ordered_json topology_to_json(const Topology& topology) {
  ordered_json doc;
  doc["tiers"] = ordered_json::array();
  for (const auto& tier : topology.tiers) {
    ordered_json tier_doc;
    tier_doc["nodes"] = ordered_json::array();
    for (const auto& node : tier.nodes) {
      tier_doc["nodes"].push_back({{"compute_gflops", node.compute_gflops},
                                   {"memory_gb", node.memory_gb},
                                   {"efficiency", node.efficiency}});
    }
    doc["tiers"].push_back(std::move(tier_doc));
  }
  doc["links"] = ordered_json::array();
  for (const auto& link : topology.links) {
    if (link.rate_bps) {
      doc["links"].push_back({{"rate_bps", *link.rate_bps}});
    } else {
      doc["links"].push_back({{"bandwidth_hz", *link.bandwidth_hz}, {"sinr", *link.sinr}});
    }
  }
  return doc;
}

std::vector<NodeState> tier_state_from_json(const ordered_json& doc, double* now_s) {
  ErrorList errors;
  std::vector<NodeState> states;
  if (now_s) {
    *now_s = doc.contains("now_s") ? doc["now_s"].get<double>() : 0.0;
  }
  if (!doc.contains("nodes") || !doc["nodes"].is_array() || doc["nodes"].empty()) {
    errors.add("/nodes", "missing, not an array, or empty");
  } else {
    for (size_t k = 0; k < doc["nodes"].size(); ++k) {
      const std::string ptr = "/nodes/" + std::to_string(k);
      const auto& node_doc = doc["nodes"][k];
      NodeState state;
      state.compute_gflops = require_number(node_doc, ptr, "compute_gflops", errors);
      if (node_doc.contains("mem_capacity_gb")) {
        state.mem_capacity_gb = node_doc["mem_capacity_gb"].get<double>();
      }
      if (node_doc.contains("mem_available_gb")) {
        state.mem_available_gb = node_doc["mem_available_gb"].get<double>();
      }
      if (node_doc.contains("running_remaining_gflop")) {
        state.running_remaining_gflop = node_doc["running_remaining_gflop"].get<double>();
      }
      if (node_doc.contains("wait_queue_gflop")) {
        for (const auto& w : node_doc["wait_queue_gflop"]) {
          state.wait_queue_gflop.push_back(w.get<double>());
        }
      }
      if (node_doc.contains("available")) {
        state.available = node_doc["available"].get<bool>();
      }
      if (state.compute_gflops <= 0.0) errors.add(ptr + "/compute_gflops", "must be > 0");
      states.push_back(std::move(state));
    }
  }
  errors.raise_if_any("tier state");
  return states;
}

ordered_json manifest_to_json(const RunManifest& manifest) {
  ordered_json doc;
  doc["config_paths"] = manifest.config_paths;
  doc["seed"] = manifest.seed;
  doc["tool_version"] = manifest.tool_version;
  doc["policies"] = manifest.policies;
  doc["timestamp"] = manifest.timestamp;
  return doc;
}

ordered_json partition_to_json(const Partition& partition,
                               const PartitionSolution* solution,
                               const PrefixSums& sums,
                               const std::vector<int64_t>& caps_milli,
                               const RunManifest& manifest) {
  ordered_json doc;
  doc["manifest"] = manifest_to_json(manifest);
  doc["splits"] = partition.splits;
  doc["tier_ranges"] = ordered_json::array();
  doc["per_tier_load_s"] = ordered_json::array();
  doc["per_tier_memory_gb"] = ordered_json::array();
  for (int j = 1; j <= partition.num_tiers(); ++j) {
    auto [first, last] = partition.tier_range(j);
    doc["tier_ranges"].push_back({{"first_block", first + 1}, {"last_block", last}});
    doc["per_tier_load_s"].push_back(
        static_cast<double>(sums.flops_between(first, last)) /
        static_cast<double>(caps_milli[j - 1]));
    doc["per_tier_memory_gb"].push_back(from_milli(sums.mem_between(first, last)));
  }
  if (solution) {
    doc["tau_star_s"] = solution->tau_star_s;
    doc["iterations"] = solution->stats.binary_search_iterations;
    doc["feasibility_calls"] = solution->stats.feasibility_calls;
  }
  return doc;
}

ordered_json report_to_json(const SimReport& report, const RunManifest& manifest,
                            bool include_timeline) {
  ordered_json doc;
  doc["manifest"] = manifest_to_json(manifest);
  doc["completed"] = report.completed;
  doc["failed"] = report.failed;
  doc["mean_latency_s"] = report.mean_latency_s;
  doc["p95_latency_s"] = report.p95_latency_s;
  doc["makespan_s"] = report.makespan_s;
  doc["tasks"] = ordered_json::array();
  for (const auto& task : report.tasks) {
    doc["tasks"].push_back({{"id", task.id},
                            {"arrival_s", task.arrival_s},
                            {"completion_s", task.completion_s},
                            {"latency_s", task.latency_s},
                            {"failed", task.failed}});
  }
  doc["nodes"] = ordered_json::array();
  for (const auto& node : report.nodes) {
    doc["nodes"].push_back({{"tier", node.tier},
                            {"node", node.node},
                            {"busy_s", node.busy_s},
                            {"busy_frac", node.busy_frac},
                            {"mem_frac", node.mem_frac}});
  }
  if (include_timeline) {
    doc["timeline"] = ordered_json::array();
    for (const auto& entry : report.timeline) {
      doc["timeline"].push_back({{"time_s", entry.time_s},
                                 {"kind", to_string(entry.kind)},
                                 {"task", entry.task},
                                 {"pass", entry.pass},
                                 {"tier", entry.tier},
                                 {"node", entry.node}});
    }
  }
  return doc;
}

std::string compare_to_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  out << "policy,tasks,mean_latency_s,p95_latency_s,makespan_s,failed,node,busy_frac,mem_frac\n";
  for (const auto& row : rows) {
    for (const auto& node : row.nodes) {
      out << row.policy << ',' << row.tasks << ',' << fmt6(row.mean_latency_s)
          << ',' << fmt6(row.p95_latency_s) << ',' << fmt6(row.makespan_s)
          << ',' << row.failed << ',' << "t" << node.tier << "n" << node.node
          << ',' << fmt6(node.busy_frac) << ',' << fmt6(node.mem_frac) << '\n';
    }
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("cannot write file: " + path);
  }
  out << contents;
  if (!out) {
    throw ValidationError("write failed: " + path);
  }
}

}  // namespace hyperion
