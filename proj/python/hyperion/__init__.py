"""Python surface over the C++ core: offline min-max partitioning, online
dispatch, and the deterministic multi-tier pipeline simulator.

Profiles and topologies are plain dicts matching the JSON schemas used by the
CLI; results come back as dicts (reports, partitions) or CSV text (compare).
"""

import json

from hyperion._core import (  # noqa: F401
    InfeasibleMemoryError,
    NoFeasibleNodeError,
    ValidationError,
    __version__,
)
from hyperion import _core


def solve_partition(profile, topology, epsilon=1e-3):
    """Optimal bottleneck-minimizing partition for a profile/topology pair."""
    return json.loads(
        _core.solve_partition_json(json.dumps(profile), json.dumps(topology), epsilon)
    )


def baseline_partition(profile, topology, policy):
    """Partition according to a named policy: hyperion, heft, or gpipe."""
    return json.loads(
        _core.baseline_partition_json(json.dumps(profile), json.dumps(topology), policy)
    )


def simulate(
    profile,
    topology,
    policy="hyperion",
    tasks=1,
    rate=0.2,
    seed=42,
    tokens_in=64,
    tokens_out=128,
    granularity="per_task",
    epsilon=1e-3,
    timeline=False,
):
    """One deterministic simulation run; returns the report as a dict."""
    return json.loads(
        _core.simulate_json(
            json.dumps(profile),
            json.dumps(topology),
            policy,
            tasks,
            rate,
            seed,
            tokens_in,
            tokens_out,
            granularity,
            epsilon,
            timeline,
        )
    )


def compare(
    profile,
    topology,
    policies,
    task_counts,
    rate=0.2,
    seed=42,
    tokens_in=64,
    tokens_out=128,
    granularity="per_task",
):
    """Paired-seed comparison across policies; returns CSV text."""
    return _core.compare_csv(
        json.dumps(profile),
        json.dumps(topology),
        list(policies),
        list(task_counts),
        rate,
        seed,
        tokens_in,
        tokens_out,
        granularity,
    )


def select_node(state, workload_gflop, activation_mem_gb=0.0):
    """Index of the node with the earliest expected completion."""
    return _core.select_node(json.dumps(state), workload_gflop, activation_mem_gb)


def verify(instances=50, max_blocks=10, dispatch_cases=1000, seed=42):
    """Randomized cross-check against the brute-force oracles."""
    return _core.verify(instances, max_blocks, dispatch_cases, seed)
