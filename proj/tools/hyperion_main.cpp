#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperion/errors.hpp"
#include "hyperion/json_io.hpp"
#include "hyperion/oracle.hpp"
#include "hyperion/partitioner.hpp"
#include "hyperion/scheduler.hpp"
#include "hyperion/simulator.hpp"
#include "hyperion/verify.hpp"

namespace {

using namespace hyperion;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitMismatch = 3;

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (start <= text.size()) {
    const size_t comma = text.find(',', start);
    if (comma == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return parts;
}

// "1..14" or "2,6,10,14".
std::vector<int> parse_task_range(const std::string& text) {
  std::vector<int> counts;
  const size_t dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (lo < 1 || hi < lo) throw ValidationError("bad task range: " + text);
    for (int n = lo; n <= hi; ++n) counts.push_back(n);
  } else {
    for (const auto& part : split_csv(text)) counts.push_back(std::stoi(part));
  }
  return counts;
}

Granularity parse_granularity(const std::string& name) {
  if (name == "per_task") return Granularity::PerTask;
  if (name == "per_token") return Granularity::PerToken;
  throw ValidationError("granularity must be per_task or per_token");
}

void emit(const std::string& out_path, const std::string& contents) {
  if (out_path.empty()) {
    std::cout << contents;
    if (!contents.empty() && contents.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(out_path, contents);
  }
}

int cmd_partition(const std::string& model_path, const std::string& topo_path,
                  double epsilon, bool tight_lower, const std::string& out_path,
                  uint64_t seed) {
  const ModelProfile profile = load_profile(model_path);
  const Topology topology = load_topology(topo_path);
  const PrefixSums sums = prefix_sums(profile);
  const auto caps = capacities_milli(topology);
  const auto mems = memories_mb(topology);

  const PartitionSolution solution = solve(sums, caps, mems, epsilon, tight_lower);
  const RunManifest manifest =
      RunManifest::make({model_path, topo_path}, seed, {"hyperion"});
  const ordered_json doc =
      partition_to_json(solution.partition, &solution, sums, caps, manifest);
  emit(out_path, doc.dump(2));
  return kExitOk;
}

int cmd_dispatch(const std::string& state_path, double workload, double mem) {
  std::ifstream in(state_path);
  if (!in) throw ValidationError("cannot open file: " + state_path);
  const ordered_json doc = ordered_json::parse(in);
  double now = 0.0;
  const std::vector<NodeState> states = tier_state_from_json(doc, &now);
  const DispatchRequest req{workload, mem, now};

  for (size_t k = 0; k < states.size(); ++k) {
    const NodeState& state = states[k];
    std::printf("node %zu: ", k);
    if (!state.available) {
      std::printf("unavailable\n");
    } else if (state.mem_available_gb < mem) {
      std::printf("infeasible (mem %.3f < %.3f GB)\n", state.mem_available_gb, mem);
    } else {
      std::printf("wait %.6f s, completion %.6f s\n", expected_wait(state),
                  completion_time(state, req));
    }
  }
  const DispatchDecision decision = select_node(states, req);
  std::printf("chosen: node %d (completion %.6f s)\n", decision.node,
              decision.expected_completion_s);
  return kExitOk;
}

int cmd_simulate(const std::string& model_path, const std::string& topo_path,
                 const SimConfig& cfg, double epsilon,
                 const std::string& out_path, bool timeline) {
  const ModelProfile profile = load_profile(model_path);
  const Topology topology = load_topology(topo_path);
  const PrefixSums sums = prefix_sums(profile);
  const Partition partition =
      build_partition(cfg.policy.partition, sums, topology, epsilon);
  const SimReport report = run(cfg, topology, profile, partition);
  const RunManifest manifest =
      RunManifest::make({model_path, topo_path}, cfg.seed, {cfg.policy.name});
  emit(out_path, report_to_json(report, manifest, timeline).dump(2));
  return kExitOk;
}

int cmd_compare(const std::string& model_path, const std::string& topo_path,
                SimConfig cfg, const std::string& policies_csv,
                const std::string& task_range, double epsilon,
                const std::string& out_path) {
  const std::vector<std::string> policies = split_csv(policies_csv);
  if (policies.empty() || policies.front().empty()) {
    throw ValidationError("compare: empty policy list");
  }
  const std::vector<int> counts = parse_task_range(task_range);
  const ModelProfile profile = load_profile(model_path);
  const Topology topology = load_topology(topo_path);
  const auto rows = compare(cfg, topology, profile, policies, counts, epsilon);
  emit(out_path, compare_to_csv(rows));
  return kExitOk;
}

int cmd_verify(const VerifyOptions& options) {
  const VerifyOutcome outcome = run_verification(options);
  std::printf("partition optimality : %d checked, %d mismatches\n",
              outcome.partition_checked, outcome.partition_mismatches);
  std::printf("feasibility monotone : %d checked, %d violations\n",
              outcome.monotonicity_checked, outcome.monotonicity_violations);
  std::printf("dispatch agreement   : %d checked, %d mismatches\n",
              outcome.dispatch_checked, outcome.dispatch_mismatches);
  std::printf("constraints          : %d violations\n", outcome.constraint_violations);
  std::printf("complexity bounds    : %d violations\n", outcome.complexity_violations);
  for (const auto& failure : outcome.failures) {
    std::printf("  ! %s\n", failure.c_str());
  }
  std::printf("%s\n", outcome.ok() ? "PASS" : "FAIL");
  return outcome.ok() ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperion: min-max pipeline partitioning and online dispatch "
               "over multi-tier networks, with a deterministic simulator"};
  app.require_subcommand(1);

  std::string model_path;
  std::string topo_path;
  std::string out_path;
  std::string state_path;
  std::string policy_name = "hyperion";
  std::string policies_csv = "hyperion,heft,gpipe";
  std::string task_range = "1..14";
  std::string granularity = "per_task";
  double epsilon = 1e-3;
  bool tight_lower = false;
  bool no_timeline = false;
  double workload = 0.0;
  double mem = 0.0;
  SimConfig cfg;
  VerifyOptions verify_options;

  auto* partition_cmd = app.add_subcommand("partition", "Solve the offline min-max split");
  partition_cmd->add_option("--model", model_path, "Model profile JSON")->required();
  partition_cmd->add_option("--topology", topo_path, "Topology JSON")->required();
  partition_cmd->add_option("--epsilon", epsilon, "Binary search precision (s)");
  partition_cmd->add_flag("--tight-lower-bound", tight_lower,
                          "Start the search at the max-single-block bound");
  partition_cmd->add_option("--out", out_path, "Output JSON path (default stdout)");
  partition_cmd->add_option("--seed", cfg.seed, "Seed echoed into the manifest");

  auto* dispatch_cmd = app.add_subcommand("dispatch", "Pick a node for one task (debugging)");
  dispatch_cmd->add_option("--state", state_path, "Tier state JSON")->required();
  dispatch_cmd->add_option("--workload", workload, "Task workload (GFLOP)")->required();
  dispatch_cmd->add_option("--mem", mem, "Activation memory (GB)");

  auto* simulate_cmd = app.add_subcommand("simulate", "Run one simulation");
  simulate_cmd->add_option("--model", model_path)->required();
  simulate_cmd->add_option("--topology", topo_path)->required();
  simulate_cmd->add_option("--policy", policy_name, "hyperion|heft|gpipe");
  simulate_cmd->add_option("--tasks", cfg.num_tasks, "Number of tasks");
  simulate_cmd->add_option("--lambda", cfg.lambda, "Arrival rate (tasks/s)");
  simulate_cmd->add_option("--tokens-in", cfg.prompt_tokens, "Prompt tokens");
  simulate_cmd->add_option("--tokens-out", cfg.output_tokens, "Output tokens");
  simulate_cmd->add_option("--granularity", granularity, "per_task|per_token");
  simulate_cmd->add_option("--seed", cfg.seed, "RNG seed");
  simulate_cmd->add_option("--epsilon", epsilon, "Partitioner precision (s)");
  simulate_cmd->add_flag("--no-timeline", no_timeline, "Omit the event timeline");
  simulate_cmd->add_option("--out", out_path, "Report JSON path (default stdout)");

  auto* compare_cmd = app.add_subcommand("compare", "Paired-seed policy comparison");
  compare_cmd->add_option("--model", model_path)->required();
  compare_cmd->add_option("--topology", topo_path)->required();
  compare_cmd->add_option("--policies", policies_csv, "Comma list of policies");
  compare_cmd->add_option("--task-range", task_range, "e.g. 1..14 or 2,6,10,14");
  compare_cmd->add_option("--lambda", cfg.lambda, "Arrival rate (tasks/s)");
  compare_cmd->add_option("--tokens-in", cfg.prompt_tokens, "Prompt tokens");
  compare_cmd->add_option("--tokens-out", cfg.output_tokens, "Output tokens");
  compare_cmd->add_option("--granularity", granularity, "per_task|per_token");
  compare_cmd->add_option("--seed", cfg.seed, "RNG seed shared across policies");
  compare_cmd->add_option("--epsilon", epsilon, "Partitioner precision (s)");
  compare_cmd->add_option("--out", out_path, "CSV path (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "Cross-check against brute-force oracles");
  verify_cmd->add_option("--instances", verify_options.partition_instances,
                         "Random partition instances");
  verify_cmd->add_option("--max-blocks", verify_options.max_blocks, "Max N per instance");
  verify_cmd->add_option("--dispatch-cases", verify_options.dispatch_cases,
                         "Random dispatch snapshots");
  verify_cmd->add_option("--seed", verify_options.seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (partition_cmd->parsed()) {
      return cmd_partition(model_path, topo_path, epsilon, tight_lower, out_path, cfg.seed);
    }
    if (dispatch_cmd->parsed()) {
      return cmd_dispatch(state_path, workload, mem);
    }
    if (simulate_cmd->parsed() || compare_cmd->parsed()) {
      cfg.granularity = parse_granularity(granularity);
      if (simulate_cmd->parsed()) {
        cfg.policy = PolicySpec::named(policy_name);
        return cmd_simulate(model_path, topo_path, cfg, epsilon, out_path, !no_timeline);
      }
      return cmd_compare(model_path, topo_path, cfg, policies_csv, task_range,
                         epsilon, out_path);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify(verify_options);
    }
  } catch (const InfeasibleMemoryError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const NoFeasibleNodeError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
