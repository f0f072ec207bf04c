#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "hyperion/errors.hpp"
#include "hyperion/json_io.hpp"
#include "hyperion/oracle.hpp"
#include "hyperion/partitioner.hpp"
#include "hyperion/scheduler.hpp"
#include "hyperion/simulator.hpp"
#include "hyperion/verify.hpp"

namespace py = pybind11;
using namespace hyperion;

namespace {

ModelProfile parse_profile(const std::string& json_text) {
  return profile_from_json(ordered_json::parse(json_text));
}

Topology parse_topology(const std::string& json_text) {
  return topology_from_json(ordered_json::parse(json_text));
}

SimConfig make_config(const std::string& policy, int tasks, double lambda,
                      uint64_t seed, int tokens_in, int tokens_out,
                      const std::string& granularity) {
  SimConfig cfg;
  cfg.policy = PolicySpec::named(policy);
  cfg.num_tasks = tasks;
  cfg.lambda = lambda;
  cfg.seed = seed;
  cfg.prompt_tokens = tokens_in;
  cfg.output_tokens = tokens_out;
  if (granularity == "per_task") {
    cfg.granularity = Granularity::PerTask;
  } else if (granularity == "per_token") {
    cfg.granularity = Granularity::PerToken;
  } else {
    throw ValidationError("granularity must be per_task or per_token");
  }
  return cfg;
}

std::string solve_partition_json(const std::string& profile_json,
                                 const std::string& topology_json,
                                 double epsilon) {
  const ModelProfile profile = parse_profile(profile_json);
  const Topology topology = parse_topology(topology_json);
  const PrefixSums sums = prefix_sums(profile);
  const auto caps = capacities_milli(topology);
  const auto mems = memories_mb(topology);
  const PartitionSolution solution = solve(sums, caps, mems, epsilon);
  const RunManifest manifest = RunManifest::make({}, 0, {"hyperion"});
  return partition_to_json(solution.partition, &solution, sums, caps, manifest).dump();
}

std::string baseline_partition_json(const std::string& profile_json,
                                    const std::string& topology_json,
                                    const std::string& policy) {
  const ModelProfile profile = parse_profile(profile_json);
  const Topology topology = parse_topology(topology_json);
  const PrefixSums sums = prefix_sums(profile);
  const Partition partition = build_partition(PolicySpec::named(policy).partition,
                                              sums, topology);
  const RunManifest manifest = RunManifest::make({}, 0, {policy});
  return partition_to_json(partition, nullptr, sums, capacities_milli(topology),
                           manifest).dump();
}

std::string simulate_json(const std::string& profile_json,
                          const std::string& topology_json,
                          const std::string& policy, int tasks, double lambda,
                          uint64_t seed, int tokens_in, int tokens_out,
                          const std::string& granularity, double epsilon,
                          bool timeline) {
  const ModelProfile profile = parse_profile(profile_json);
  const Topology topology = parse_topology(topology_json);
  const SimConfig cfg =
      make_config(policy, tasks, lambda, seed, tokens_in, tokens_out, granularity);
  const PrefixSums sums = prefix_sums(profile);
  const Partition partition =
      build_partition(cfg.policy.partition, sums, topology, epsilon);
  const SimReport report = run(cfg, topology, profile, partition);
  const RunManifest manifest = RunManifest::make({}, seed, {policy});
  return report_to_json(report, manifest, timeline).dump();
}

std::string compare_csv(const std::string& profile_json,
                        const std::string& topology_json,
                        const std::vector<std::string>& policies,
                        const std::vector<int>& task_counts, double lambda,
                        uint64_t seed, int tokens_in, int tokens_out,
                        const std::string& granularity) {
  const ModelProfile profile = parse_profile(profile_json);
  const Topology topology = parse_topology(topology_json);
  SimConfig cfg = make_config(policies.empty() ? "hyperion" : policies.front(),
                              1, lambda, seed, tokens_in, tokens_out, granularity);
  return compare_to_csv(compare(cfg, topology, profile, policies, task_counts));
}

int select_node_index(const std::string& state_json, double workload,
                      double activation_mem) {
  double now = 0.0;
  const std::vector<NodeState> states =
      tier_state_from_json(ordered_json::parse(state_json), &now);
  return select_node(states, {workload, activation_mem, now}).node;
}

py::dict verify_dict(int instances, int max_blocks, int dispatch_cases,
                     uint64_t seed) {
  VerifyOptions options;
  options.partition_instances = instances;
  options.max_blocks = max_blocks;
  options.dispatch_cases = dispatch_cases;
  options.seed = seed;
  const VerifyOutcome outcome = run_verification(options);
  py::dict result;
  result["ok"] = outcome.ok();
  result["partition_checked"] = outcome.partition_checked;
  result["partition_mismatches"] = outcome.partition_mismatches;
  result["monotonicity_violations"] = outcome.monotonicity_violations;
  result["dispatch_checked"] = outcome.dispatch_checked;
  result["dispatch_mismatches"] = outcome.dispatch_mismatches;
  result["constraint_violations"] = outcome.constraint_violations;
  result["complexity_violations"] = outcome.complexity_violations;
  return result;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Min-max pipeline partitioning, online dispatch, and the "
            "deterministic multi-tier simulator";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<InfeasibleMemoryError>(m, "InfeasibleMemoryError",
                                                PyExc_RuntimeError);
  py::register_exception<NoFeasibleNodeError>(m, "NoFeasibleNodeError",
                                              PyExc_RuntimeError);

  m.def("solve_partition_json", &solve_partition_json, py::arg("profile_json"),
        py::arg("topology_json"), py::arg("epsilon") = 1e-3);
  m.def("baseline_partition_json", &baseline_partition_json,
        py::arg("profile_json"), py::arg("topology_json"), py::arg("policy"));
  m.def("simulate_json", &simulate_json, py::arg("profile_json"),
        py::arg("topology_json"), py::arg("policy") = "hyperion",
        py::arg("tasks") = 1, py::arg("lambda_") = 0.2, py::arg("seed") = 42,
        py::arg("tokens_in") = 64, py::arg("tokens_out") = 128,
        py::arg("granularity") = "per_task", py::arg("epsilon") = 1e-3,
        py::arg("timeline") = false);
  m.def("compare_csv", &compare_csv, py::arg("profile_json"),
        py::arg("topology_json"), py::arg("policies"), py::arg("task_counts"),
        py::arg("lambda_") = 0.2, py::arg("seed") = 42, py::arg("tokens_in") = 64,
        py::arg("tokens_out") = 128, py::arg("granularity") = "per_task");
  m.def("select_node", &select_node_index, py::arg("state_json"),
        py::arg("workload_gflop"), py::arg("activation_mem_gb") = 0.0);
  m.def("verify", &verify_dict, py::arg("instances") = 50,
        py::arg("max_blocks") = 10, py::arg("dispatch_cases") = 1000,
        py::arg("seed") = 42);
  m.attr("__version__") = HYPERION_VERSION;
}
