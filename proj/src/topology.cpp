#include "hyperion/topology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hyperion/errors.hpp"
#include "hyperion/units.hpp"

namespace hyperion {

void validate(const Topology& topology) {
  if (topology.tiers.empty()) {
    throw ValidationError("topology: needs at least one tier");
  }
  for (size_t j = 0; j < topology.tiers.size(); ++j) {
    const auto& tier = topology.tiers[j];
    if (tier.nodes.empty()) {
      throw ValidationError("topology: tier " + std::to_string(j + 1) + " has no nodes");
    }
    for (size_t k = 0; k < tier.nodes.size(); ++k) {
      const auto& node = tier.nodes[k];
      const std::string where =
          "topology: tier " + std::to_string(j + 1) + " node " + std::to_string(k);
      if (!(node.compute_gflops > 0.0) || !std::isfinite(node.compute_gflops)) {
        throw ValidationError(where + ": compute must be finite and > 0");
      }
      if (!(node.memory_gb > 0.0) || !std::isfinite(node.memory_gb)) {
        throw ValidationError(where + ": memory must be finite and > 0");
      }
      if (!(node.efficiency > 0.0)) {
        throw ValidationError(where + ": efficiency must be > 0");
      }
    }
  }
  if (topology.links.size() + 1 != topology.tiers.size()) {
    throw ValidationError("topology: expected " +
                          std::to_string(topology.tiers.size() - 1) +
                          " links, got " + std::to_string(topology.links.size()));
  }
  for (const auto& link : topology.links) {
    link_rate(link);  // throws on unresolvable / nonpositive rates
  }
}

TierCapacity effective_capacity(const TierSpec& tier) {
  if (tier.nodes.empty()) {
    throw ValidationError("effective_capacity: tier has no nodes");
  }
  TierCapacity cap;
  for (const auto& node : tier.nodes) {
    cap.compute_gflops = std::max(cap.compute_gflops, node.effective_compute());
    cap.memory_gb = std::max(cap.memory_gb, node.memory_gb);
  }
  return cap;
}

double link_rate(const LinkSpec& link) {
  double rate = 0.0;
  if (link.rate_bps) {
    rate = *link.rate_bps;
  } else if (link.bandwidth_hz && link.sinr) {
    rate = *link.bandwidth_hz * std::log2(1.0 + *link.sinr);
  } else {
    throw ValidationError("link: needs rate_bps or (bandwidth_hz, sinr)");
  }
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw ValidationError("link: resolved rate must be finite and > 0");
  }
  return rate;
}

double transfer_latency(const LinkSpec& link, int64_t payload_bytes) {
  if (payload_bytes < 0) {
    throw ValidationError("transfer_latency: payload must be >= 0");
  }
  if (payload_bytes == 0) return 0.0;
  return 8.0 * static_cast<double>(payload_bytes) / link_rate(link);
}

double total_comm_latency(const Topology& topology, int64_t payload_bytes) {
  double total = 0.0;
  for (const auto& link : topology.links) {
    total += transfer_latency(link, payload_bytes);
  }
  return total;
}

std::vector<int64_t> capacities_milli(const Topology& topology) {
  std::vector<int64_t> caps;
  caps.reserve(topology.tiers.size());
  for (const auto& tier : topology.tiers) {
    caps.push_back(to_milli(effective_capacity(tier).compute_gflops));
  }
  return caps;
}

std::vector<int64_t> memories_mb(const Topology& topology) {
  std::vector<int64_t> mems;
  mems.reserve(topology.tiers.size());
  for (const auto& tier : topology.tiers) {
    mems.push_back(to_milli(effective_capacity(tier).memory_gb));
  }
  return mems;
}

}  // namespace hyperion
