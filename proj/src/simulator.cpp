#include "hyperion/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <string>

#include "hyperion/errors.hpp"
#include "hyperion/oracle.hpp"
#include "hyperion/partitioner.hpp"
#include "hyperion/rng.hpp"
#include "hyperion/scheduler.hpp"
#include "hyperion/units.hpp"

namespace hyperion {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::StageStart: return "stage_start";
    case EventKind::StageComplete: return "stage_complete";
    case EventKind::TransferComplete: return "transfer_complete";
    case EventKind::Arrival: return "arrival";
  }
  return "?";
}

Partition build_partition(PartitionPolicy policy, const PrefixSums& sums,
                          const Topology& topology, double epsilon_s) {
  const auto caps = capacities_milli(topology);
  const auto mems = memories_mb(topology);
  switch (policy) {
    case PartitionPolicy::HypsplitDp:
      return solve(sums, caps, mems, epsilon_s).partition;
    case PartitionPolicy::GpipeBalanced:
      return gpipe_partition(sums, topology.num_tiers());
    case PartitionPolicy::HeftGreedy:
      return heft_partition(sums, caps, mems);
  }
  throw ValidationError("unknown partition policy");
}

std::vector<Task> generate_workload(const SimConfig& cfg,
                                    const ModelProfile& profile,
                                    const Partition& partition) {
  if (!(cfg.lambda > 0.0)) throw ValidationError("sim: lambda must be > 0");
  if (cfg.num_tasks < 1) throw ValidationError("sim: num_tasks must be >= 1");
  if (cfg.prompt_tokens < 1 || cfg.output_tokens < 1 || cfg.batch < 1) {
    throw ValidationError("sim: token settings must be >= 1");
  }
  validate_partition(partition);
  const int tiers = partition.num_tiers();

  std::vector<double> prefill(tiers, 0.0);
  std::vector<double> decode(tiers, 0.0);
  for (int j = 1; j <= tiers; ++j) {
    auto [first, last] = partition.tier_range(j);
    for (int i = first; i < last; ++i) {
      const double f = profile.blocks[i].flops_gflop;
      prefill[j - 1] += profile.prefill_flops_per_block
                            ? *profile.prefill_flops_per_block
                            : cfg.prompt_tokens * f;
      decode[j - 1] += f;
    }
  }

  const int64_t prompt_payload =
      activation_bytes(cfg.batch, cfg.prompt_tokens, profile);
  const int64_t token_payload = activation_bytes(cfg.batch, 1, profile);

  Rng rng(cfg.seed);
  std::vector<Task> tasks;
  tasks.reserve(cfg.num_tasks);
  double clock = 0.0;
  for (int id = 0; id < cfg.num_tasks; ++id) {
    clock += rng.next_exponential(cfg.lambda);
    Task task;
    task.id = id;
    task.arrival_s = clock;
    task.prompt_tokens = cfg.prompt_tokens;
    task.output_tokens = cfg.output_tokens;
    task.per_stage_prefill_gflop = prefill;
    task.per_stage_decode_gflop = decode;
    task.per_stage_workload_gflop.resize(tiers);
    for (int j = 0; j < tiers; ++j) {
      task.per_stage_workload_gflop[j] =
          prefill[j] + cfg.output_tokens * decode[j];
    }
    task.per_hop_payload_bytes = prompt_payload;
    task.token_payload_bytes = token_payload;
    task.activation_mem_gb = static_cast<double>(prompt_payload) / 1e9;
    tasks.push_back(std::move(task));
  }
  return tasks;
}

namespace {

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::Arrival;
  int task = -1;
  int pass = 0;
  int tier = 0;  // 0-based
  int node = -1;

  // Completions drain before new arrivals at the same instant; remaining
  // fields pin a total order for determinism.
  bool operator>(const Event& other) const {
    if (time != other.time) return time > other.time;
    if (kind != other.kind) return static_cast<int>(kind) > static_cast<int>(other.kind);
    if (task != other.task) return task > other.task;
    if (pass != other.pass) return pass > other.pass;
    return tier > other.tier;
  }
};

struct QueuedPass {
  int task = -1;
  int pass = 0;
  double workload_gflop = 0.0;
  double activation_gb = 0.0;
};

struct SimNode {
  double compute = 0.0;
  double mem_capacity = 0.0;
  double mem_available = 0.0;
  bool available = true;
  bool busy = false;
  double busy_until = 0.0;
  double service_started = 0.0;
  QueuedPass current;
  std::deque<QueuedPass> fifo;
  double busy_accum = 0.0;
  double peak_mem_used = 0.0;

  void note_mem() { peak_mem_used = std::max(peak_mem_used, mem_capacity - mem_available); }
};

}  // namespace

SimReport run(const SimConfig& cfg, const Topology& topology,
              const ModelProfile& profile, const Partition& partition) {
  validate(topology);
  validate(profile);
  validate_partition(partition);
  if (partition.num_tiers() != topology.num_tiers()) {
    throw ValidationError("sim: partition tier count does not match topology");
  }
  const auto sums = prefix_sums(profile);
  const auto mems = memories_mb(topology);
  if (!satisfies_memory(partition, sums, mems)) {
    throw InfeasibleMemoryError(0, "sim: partition is memory-infeasible on this topology");
  }

  const int tiers = topology.num_tiers();
  const bool per_token = cfg.granularity == Granularity::PerToken;

  std::vector<Task> tasks = generate_workload(cfg, profile, partition);

  // Static shard deployment: nodes that cannot hold their tier's blocks are
  // not part of the serving set.
  std::vector<std::vector<SimNode>> nodes(tiers);
  for (int j = 0; j < tiers; ++j) {
    auto [first, last] = partition.tier_range(j + 1);
    const double shard_gb = from_milli(sums.mem_between(first, last));
    for (const NodeSpec& spec : topology.tiers[j].nodes) {
      SimNode node;
      node.compute = spec.effective_compute();
      node.mem_capacity = spec.memory_gb;
      if (spec.memory_gb < shard_gb) {
        node.available = false;
        node.mem_available = spec.memory_gb;
      } else {
        node.mem_available = spec.memory_gb - shard_gb;
      }
      node.note_mem();
      nodes[j].push_back(node);
    }
  }

  Dispatcher dispatcher(cfg.policy.dispatch, tiers);
  SimReport report;
  report.tasks.resize(tasks.size());
  for (const Task& task : tasks) {
    report.tasks[task.id] = {task.id, task.arrival_s, 0.0, 0.0, false};
  }
  std::vector<char> task_failed(tasks.size(), 0);

  const int total_passes = per_token ? 1 + cfg.output_tokens : 1;
  auto pass_workload = [&](const Task& task, int pass, int tier) {
    if (!per_token) return task.per_stage_workload_gflop[tier];
    return pass == 0 ? task.per_stage_prefill_gflop[tier]
                     : task.per_stage_decode_gflop[tier];
  };
  auto pass_payload = [&](const Task& task, int pass) {
    if (!per_token) return task.per_hop_payload_bytes;
    return pass == 0 ? task.per_hop_payload_bytes : task.token_payload_bytes;
  };
  auto pass_activation_gb = [&](const Task& task, int pass) {
    return static_cast<double>(pass_payload(task, pass)) / 1e9;
  };

  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue;
  for (const Task& task : tasks) {
    queue.push({task.arrival_s, EventKind::Arrival, task.id, 0, 0, -1});
  }

  auto start_service = [&](int tier, int node_idx, double now) {
    SimNode& node = nodes[tier][node_idx];
    node.current = node.fifo.front();
    node.fifo.pop_front();
    node.busy = true;
    node.service_started = now;
    node.busy_until = now + node.current.workload_gflop / node.compute;
    report.timeline.push_back(
        {now, EventKind::StageStart, node.current.task, node.current.pass, tier + 1, node_idx});
    queue.push({node.busy_until, EventKind::StageComplete, node.current.task,
                node.current.pass, tier, node_idx});
  };

  while (!queue.empty()) {
    const Event ev = queue.top();
    queue.pop();
    const Task& task = tasks[ev.task];

    switch (ev.kind) {
      case EventKind::Arrival: {
        if (task_failed[ev.task]) break;
        // Consistent snapshot of the tier at this instant.
        std::vector<NodeState> snapshot;
        snapshot.reserve(nodes[ev.tier].size());
        for (const SimNode& node : nodes[ev.tier]) {
          NodeState state;
          state.compute_gflops = node.compute;
          state.mem_capacity_gb = node.mem_capacity;
          state.mem_available_gb = node.mem_available;
          state.available = node.available;
          state.running_remaining_gflop =
              node.busy ? (node.busy_until - ev.time) * node.compute : 0.0;
          if (state.running_remaining_gflop < 0.0) state.running_remaining_gflop = 0.0;
          for (const QueuedPass& queued : node.fifo) {
            state.wait_queue_gflop.push_back(queued.workload_gflop);
          }
          snapshot.push_back(std::move(state));
        }
        DispatchRequest req{pass_workload(task, ev.pass, ev.tier),
                            pass_activation_gb(task, ev.pass), ev.time};
        int chosen;
        try {
          chosen = dispatcher.dispatch(ev.tier, snapshot, req).node;
        } catch (const NoFeasibleNodeError&) {
          task_failed[ev.task] = 1;
          report.tasks[ev.task].failed = true;
          report.timeline.push_back(
              {ev.time, EventKind::Arrival, ev.task, ev.pass, ev.tier + 1, -1});
          break;
        }
        // The arrival entry records the node the pass was enqueued on.
        report.timeline.push_back(
            {ev.time, EventKind::Arrival, ev.task, ev.pass, ev.tier + 1, chosen});
        SimNode& node = nodes[ev.tier][chosen];
        node.mem_available -= req.activation_mem_gb;  // reserved until stage end
        node.note_mem();
        node.fifo.push_back({ev.task, ev.pass, req.workload_gflop, req.activation_mem_gb});
        if (!node.busy) start_service(ev.tier, chosen, ev.time);
        break;
      }

      case EventKind::StageComplete: {
        SimNode& node = nodes[ev.tier][ev.node];
        node.busy_accum += ev.time - node.service_started;
        node.mem_available += node.current.activation_gb;
        node.busy = false;
        report.timeline.push_back(
            {ev.time, EventKind::StageComplete, ev.task, ev.pass, ev.tier + 1, ev.node});
        if (!node.fifo.empty()) start_service(ev.tier, ev.node, ev.time);

        if (ev.tier + 1 < tiers) {
          const double hop = transfer_latency(topology.links[ev.tier],
                                              pass_payload(task, ev.pass));
          queue.push({ev.time + hop, EventKind::TransferComplete, ev.task,
                      ev.pass, ev.tier + 1, -1});
        } else if (per_token && ev.pass + 1 < total_passes) {
          queue.push({ev.time, EventKind::Arrival, ev.task, ev.pass + 1, 0, -1});
        } else {
          report.tasks[ev.task].completion_s = ev.time;
          report.tasks[ev.task].latency_s = ev.time - task.arrival_s;
        }
        break;
      }

      case EventKind::TransferComplete: {
        report.timeline.push_back(
            {ev.time, EventKind::TransferComplete, ev.task, ev.pass, ev.tier + 1, -1});
        queue.push({ev.time, EventKind::Arrival, ev.task, ev.pass, ev.tier, -1});
        break;
      }

      case EventKind::StageStart:
        break;  // recorded inline, never queued
    }
  }

  // Aggregate.
  std::vector<double> latencies;
  for (const TaskOutcome& outcome : report.tasks) {
    if (outcome.failed) {
      ++report.failed;
    } else {
      ++report.completed;
      latencies.push_back(outcome.latency_s);
      report.makespan_s = std::max(report.makespan_s, outcome.completion_s);
    }
  }
  if (!latencies.empty()) {
    double sum = 0.0;
    for (double v : latencies) sum += v;
    report.mean_latency_s = sum / static_cast<double>(latencies.size());
    std::vector<double> sorted = latencies;
    std::sort(sorted.begin(), sorted.end());
    const size_t idx = static_cast<size_t>(
        std::ceil(0.95 * static_cast<double>(sorted.size()))) - 1;
    report.p95_latency_s = sorted[idx];
  }
  for (int j = 0; j < tiers; ++j) {
    for (size_t k = 0; k < nodes[j].size(); ++k) {
      const SimNode& node = nodes[j][k];
      NodeReport nr;
      nr.tier = j + 1;
      nr.node = static_cast<int>(k);
      nr.busy_s = node.busy_accum;
      nr.busy_frac = report.makespan_s > 0.0 ? node.busy_accum / report.makespan_s : 0.0;
      nr.mem_frac = node.peak_mem_used / node.mem_capacity;
      report.nodes.push_back(nr);
    }
  }
  return report;
}

std::vector<CompareRow> compare(const SimConfig& cfg, const Topology& topology,
                                const ModelProfile& profile,
                                const std::vector<std::string>& policy_names,
                                const std::vector<int>& task_counts,
                                double epsilon_s) {
  if (policy_names.empty()) throw ValidationError("compare: no policies given");
  if (task_counts.empty()) throw ValidationError("compare: no task counts given");
  const auto sums = prefix_sums(profile);

  std::vector<CompareRow> rows;
  for (const std::string& name : policy_names) {
    SimConfig run_cfg = cfg;
    run_cfg.policy = PolicySpec::named(name);
    const Partition partition =
        build_partition(run_cfg.policy.partition, sums, topology, epsilon_s);
    for (int count : task_counts) {
      run_cfg.num_tasks = count;
      const SimReport report = run(run_cfg, topology, profile, partition);
      CompareRow row;
      row.policy = name;
      row.tasks = count;
      row.mean_latency_s = report.mean_latency_s;
      row.p95_latency_s = report.p95_latency_s;
      row.makespan_s = report.makespan_s;
      row.failed = report.failed;
      row.nodes = report.nodes;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace hyperion
