#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperion/baselines.hpp"
#include "hyperion/model_profile.hpp"
#include "hyperion/partition.hpp"
#include "hyperion/topology.hpp"

namespace hyperion {

// per_task: one pipeline pass per task carrying the full prefill+decode
// workload. per_token: one prefill pass followed by output_tokens sequential
// decode passes, each with a single-token payload.
enum class Granularity { PerTask, PerToken };

struct SimConfig {
  double lambda = 0.2;  // tasks per second
  int num_tasks = 1;
  uint64_t seed = 42;
  PolicySpec policy;
  int prompt_tokens = 64;
  int output_tokens = 128;
  int batch = 1;
  Granularity granularity = Granularity::PerTask;
};

struct Task {
  int id = 0;
  double arrival_s = 0.0;
  int prompt_tokens = 0;
  int output_tokens = 0;
  // Full per-task stage workloads (prefill + all decode tokens), length T.
  std::vector<double> per_stage_workload_gflop;
  // Split costs used by per-token granularity.
  std::vector<double> per_stage_prefill_gflop;
  std::vector<double> per_stage_decode_gflop;  // one token
  int64_t per_hop_payload_bytes = 0;    // prompt-sized activation
  int64_t token_payload_bytes = 0;      // single-token activation
  double activation_mem_gb = 0.0;
};

enum class EventKind { StageStart, StageComplete, TransferComplete, Arrival };

const char* to_string(EventKind kind);

struct TimelineEntry {
  double time_s = 0.0;
  EventKind kind = EventKind::Arrival;
  int task = -1;
  int pass = 0;
  int tier = -1;
  int node = -1;
};

struct TaskOutcome {
  int id = 0;
  double arrival_s = 0.0;
  double completion_s = 0.0;
  double latency_s = 0.0;
  bool failed = false;
};

struct NodeReport {
  int tier = 0;  // 1-based
  int node = 0;
  double busy_s = 0.0;
  double busy_frac = 0.0;
  double mem_frac = 0.0;  // peak occupancy (shard + activations) / capacity
};

struct SimReport {
  std::vector<TaskOutcome> tasks;
  int completed = 0;
  int failed = 0;
  double mean_latency_s = 0.0;
  double p95_latency_s = 0.0;
  double makespan_s = 0.0;
  std::vector<NodeReport> nodes;
  std::vector<TimelineEntry> timeline;
};

// Poisson arrivals (seeded, deterministic) with per-stage workloads derived
// from the partition's block ranges and the token settings. Identical
// (seed, cfg) produce identical task lists.
std::vector<Task> generate_workload(const SimConfig& cfg,
                                    const ModelProfile& profile,
                                    const Partition& partition);

// Single-threaded event loop. Ties are processed completions-first, then by
// task id, so runs are deterministic. A dispatch with no feasible node marks
// the task failed and the run continues. Refuses to start on a partition
// that is memory-infeasible for the topology.
SimReport run(const SimConfig& cfg, const Topology& topology,
              const ModelProfile& profile, const Partition& partition);

struct CompareRow {
  std::string policy;
  int tasks = 0;
  double mean_latency_s = 0.0;
  double p95_latency_s = 0.0;
  double makespan_s = 0.0;
  int failed = 0;
  std::vector<NodeReport> nodes;
};

// Paired comparison: every (policy, task-count) cell replays the same seeded
// arrival sequence. Partitions are rebuilt per policy.
std::vector<CompareRow> compare(const SimConfig& cfg, const Topology& topology,
                                const ModelProfile& profile,
                                const std::vector<std::string>& policy_names,
                                const std::vector<int>& task_counts,
                                double epsilon_s = 1e-3);

// Partition according to the policy's offline stage.
Partition build_partition(PartitionPolicy policy, const PrefixSums& sums,
                          const Topology& topology, double epsilon_s = 1e-3);

}  // namespace hyperion
