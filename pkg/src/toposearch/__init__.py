"""Objective optimization over directed acyclic graphs via topological orders.

The package searches the space of topological orders instead of the space of
arc sets: an order fixes which arcs are admissible, the restricted problem
decomposes per node, and moves in order space (adjacent swaps, score-driven
reordering, projected gradient steps) never create cycles. Integer models
with three acyclicity encodings can be built and exported in LP format for
external solvers. The instantiated objective is L1-penalized least squares
for linear network learning on standardized data.
"""

from .graphs import (
    Cycle,
    CycleError,
    adj,
    check_adjacency,
    check_order,
    find_cycles,
    support,
    topological_order_of,
)
from .lasso import (
    ConvergenceError,
    Dataset,
    gradient_smooth,
    kkt_residual,
    objective,
    solve_column,
    solve_restricted,
    solve_unconstrained,
)
from .algorithms import (
    GdParams,
    IrParams,
    Solution,
    enumerate_orders,
    gradient_descent,
    greedy_project,
    iterative_reordering,
    multi_start,
    swap_search,
)
from .mip import (
    CutPool,
    MipModel,
    build_cycle_mip,
    build_order_mip,
    build_triangle_mip,
    check_encoding,
    estimate_big_m,
    export_lp,
)
from .datagen import GroundTruth, InstanceSpec, make_instance, standardize, suite_specs
from .harness import BenchConfig, delta_sol, run_experiment, true_positive

__version__ = "0.1.0"

__all__ = [
    "BenchConfig",
    "ConvergenceError",
    "CutPool",
    "Cycle",
    "CycleError",
    "Dataset",
    "GdParams",
    "GroundTruth",
    "InstanceSpec",
    "IrParams",
    "MipModel",
    "Solution",
    "adj",
    "build_cycle_mip",
    "build_order_mip",
    "build_triangle_mip",
    "check_adjacency",
    "check_encoding",
    "check_order",
    "delta_sol",
    "enumerate_orders",
    "estimate_big_m",
    "export_lp",
    "find_cycles",
    "gradient_descent",
    "gradient_smooth",
    "greedy_project",
    "iterative_reordering",
    "kkt_residual",
    "make_instance",
    "multi_start",
    "objective",
    "run_experiment",
    "solve_column",
    "solve_restricted",
    "solve_unconstrained",
    "standardize",
    "suite_specs",
    "support",
    "swap_search",
    "topological_order_of",
    "true_positive",
    "__version__",
]
