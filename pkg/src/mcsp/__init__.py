"""Minimum common string partition: block enumeration, exact and heuristic solvers."""
from .blocks import (
    BlockSet,
    compatible_blocks,
    enumerate_blocks,
    filter_min_length,
    l_max,
    length_histogram,
)
from .core import (
    CommonBlock,
    Instance,
    InstanceFormatError,
    InvalidPartitionError,
    MCSPError,
    Partition,
    PartitionStatus,
    UnrelatedStringsError,
    check_blocks,
    is_related,
    validate_partition,
)
from .greedy import greedy_partition
from .heuristic import HeuristicConfig, run_phase1, run_phase2, sweep_l, two_phase
from .instgen import generate_instance
from .model import build_ilp_orig, build_ilp_ph1, build_ilp_ph2, export_lp, import_solution
from .solver import (
    SolveResult,
    SolverConfig,
    SolveStatus,
    brute_force_optimal,
    solve_max_coverage,
    solve_min_partition,
)

__all__ = [
    "BlockSet", "CommonBlock", "HeuristicConfig", "Instance", "InstanceFormatError",
    "InvalidPartitionError", "MCSPError", "Partition", "PartitionStatus", "SolveResult",
    "SolveStatus", "SolverConfig", "UnrelatedStringsError", "brute_force_optimal",
    "build_ilp_orig", "build_ilp_ph1", "build_ilp_ph2", "check_blocks", "compatible_blocks",
    "enumerate_blocks", "export_lp", "filter_min_length", "generate_instance",
    "greedy_partition", "import_solution", "is_related", "l_max", "length_histogram",
    "run_phase1", "run_phase2", "solve_max_coverage", "solve_min_partition", "sweep_l",
    "two_phase", "validate_partition",
]
