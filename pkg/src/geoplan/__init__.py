"""Latency-optimal file placement for geo-distributed storage networks."""

__version__ = "0.1.0"

from .assignment import (
    ColorCostMatrix,
    FileMap,
    HungarianTrace,
    TxLatencyMatrix,
    brute_force_assignment,
    color_cost_matrix,
    hungarian_min_assignment,
    shortest_path_min_assignment,
    tx_latency_matrix,
)
from .coloring import (
    Coloring,
    ColoringEnumeration,
    Infeasible,
    enumerate_colorings,
    find_coloring,
    is_proper_partition,
    iter_colorings,
)
from .errors import (
    BudgetExceededError,
    GeoplanError,
    InvalidInputError,
    InvalidSpecError,
)
from .evaluation import (
    LatencyReport,
    LinearCode,
    RecoveryPlan,
    code_is_admissible,
    eval_linear_code,
    eval_uncoded,
    mds_code,
    receive_side_avg,
    wc_lower_bounds,
)
from .instances import example_instance, example_instance_uniform, infeasible_instance
from .model import (
    ExpandedSpec,
    NetworkSpec,
    Placement,
    ValidationResult,
    Violation,
    expand_multifile,
    load_spec,
    make_spec,
    require_valid,
    save_spec,
    spec_from_dict,
    validate_spec,
)
from .nngraph import (
    ExtendedGraph,
    NearestNeighborGraph,
    NngEnumeration,
    build_extended_graph,
    build_nng,
    enumerate_nngs,
    extended_to_dot,
    is_admissible,
    nng_to_dot,
)
from .oracle import OracleResult, Verdict, brute_force_placement, verify_plan
from .planner import (
    InfeasiblePlan,
    PlanOptions,
    PlanReport,
    PlanStats,
    compose_placement,
    plan,
)

__all__ = [
    "__version__",
    "BudgetExceededError",
    "ColorCostMatrix",
    "Coloring",
    "ColoringEnumeration",
    "ExpandedSpec",
    "ExtendedGraph",
    "FileMap",
    "GeoplanError",
    "HungarianTrace",
    "Infeasible",
    "InfeasiblePlan",
    "InvalidInputError",
    "InvalidSpecError",
    "LatencyReport",
    "LinearCode",
    "NearestNeighborGraph",
    "NetworkSpec",
    "NngEnumeration",
    "OracleResult",
    "Placement",
    "PlanOptions",
    "PlanReport",
    "PlanStats",
    "RecoveryPlan",
    "TxLatencyMatrix",
    "ValidationResult",
    "Verdict",
    "Violation",
    "brute_force_assignment",
    "brute_force_placement",
    "build_extended_graph",
    "build_nng",
    "code_is_admissible",
    "color_cost_matrix",
    "compose_placement",
    "enumerate_colorings",
    "enumerate_nngs",
    "eval_linear_code",
    "eval_uncoded",
    "example_instance",
    "example_instance_uniform",
    "expand_multifile",
    "extended_to_dot",
    "find_coloring",
    "hungarian_min_assignment",
    "infeasible_instance",
    "is_admissible",
    "is_proper_partition",
    "iter_colorings",
    "load_spec",
    "make_spec",
    "mds_code",
    "nng_to_dot",
    "plan",
    "receive_side_avg",
    "require_valid",
    "save_spec",
    "shortest_path_min_assignment",
    "spec_from_dict",
    "tx_latency_matrix",
    "validate_spec",
    "verify_plan",
    "wc_lower_bounds",
]
