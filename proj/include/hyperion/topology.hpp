#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace hyperion {

struct NodeSpec {
  double compute_gflops = 0.0;  // datasheet throughput
  double memory_gb = 0.0;
  double efficiency = 1.0;  // multiplies the datasheet number

  double effective_compute() const { return compute_gflops * efficiency; }
};

struct TierSpec {
  std::vector<NodeSpec> nodes;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
};

// Inter-tier link: either a direct rate in bits/s, or a (bandwidth, SINR)
// pair resolved through the Shannon capacity B * log2(1 + SINR).
struct LinkSpec {
  std::optional<double> rate_bps;
  std::optional<double> bandwidth_hz;
  std::optional<double> sinr;
};

// T ordered tiers; link i connects tier i to tier i+1. Tasks flow tier 1
// through tier T in pipeline order.
struct Topology {
  std::vector<TierSpec> tiers;
  std::vector<LinkSpec> links;  // length T-1

  int num_tiers() const { return static_cast<int>(tiers.size()); }
};

struct TierCapacity {
  double compute_gflops = 0.0;
  double memory_gb = 0.0;
};

void validate(const Topology& topology);

// Best single node in the tier: max compute and max memory over nodes.
TierCapacity effective_capacity(const TierSpec& tier);

// Resolved rate in bits/s; throws ValidationError if the rate is not > 0.
double link_rate(const LinkSpec& link);

// Seconds to push `payload_bytes` through the link. Zero payload is free.
double transfer_latency(const LinkSpec& link, int64_t payload_bytes);

// Sum of transfer latencies over all T-1 links for one fixed payload.
double total_comm_latency(const Topology& topology, int64_t payload_bytes);

// Per-tier effective capacities in exact integer units for the partitioner.
std::vector<int64_t> capacities_milli(const Topology& topology);
std::vector<int64_t> memories_mb(const Topology& topology);

}  // namespace hyperion
