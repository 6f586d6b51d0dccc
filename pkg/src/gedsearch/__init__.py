"""Upper bounds for graph edit distance between labeled graphs.

The package models graphs with string-labeled nodes and undirected
string-labeled edges, represents candidate solutions as node maps that may
delete and insert nodes, and tightens upper bounds with local search:
variable-size swap refinement, quadratic-program descent, and ordered beam
search, all drivable through a multi-start engine with score-guided
restarts.  Small instances can be solved exactly by enumeration.
"""

from .beam import OrderedNodeMap, bp_beam, ibp_beam, ordered_swap
from .exact import enumerate_node_maps, exact_ged
from .experiment import (
    ALGORITHMS,
    CSV_COLUMNS,
    AlgorithmSpec,
    ConfigAggregate,
    ExperimentReport,
    RunConfig,
    RunRecord,
    run_experiment,
)
from .io import (
    DanglingIndexError,
    DuplicateEdgeError,
    GraphFormatError,
    MalformedLineError,
    format_text_graph,
    generate_synthetic,
    load_cost_table,
    parse_gxl_subset,
    parse_text_dataset,
    parse_text_graph,
)
from .ipfp import FractionalMap, QuadraticModel, ipfp
from .lsape import ExtendedCostMatrix, lsape_bruteforce, lsape_solve
from .model import (
    DUMMY,
    EditCostModel,
    GraphStructureError,
    LabeledGraph,
    NodeMap,
    induced_cost,
    permute_graph,
    validate_node_map,
)
from .multistart import (
    LoopStats,
    MultistartConfig,
    ScoresMatrix,
    generate_initial_maps,
    multistart_run,
    randpost,
    sample_node_maps,
    update_scores,
)
from .refine import (
    REFINE_CONFIG,
    KRefineConfig,
    SwapCycle,
    enumerate_swaps,
    k_refine,
    swap_apply,
    swap_cost_localized,
    swap_cost_naive,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "CSV_COLUMNS",
    "DUMMY",
    "REFINE_CONFIG",
    "AlgorithmSpec",
    "ConfigAggregate",
    "DanglingIndexError",
    "DuplicateEdgeError",
    "EditCostModel",
    "ExperimentReport",
    "ExtendedCostMatrix",
    "FractionalMap",
    "GraphFormatError",
    "GraphStructureError",
    "KRefineConfig",
    "LabeledGraph",
    "LoopStats",
    "MalformedLineError",
    "MultistartConfig",
    "NodeMap",
    "OrderedNodeMap",
    "QuadraticModel",
    "RunConfig",
    "RunRecord",
    "ScoresMatrix",
    "SwapCycle",
    "bp_beam",
    "enumerate_node_maps",
    "enumerate_swaps",
    "exact_ged",
    "format_text_graph",
    "generate_initial_maps",
    "generate_synthetic",
    "ibp_beam",
    "induced_cost",
    "ipfp",
    "k_refine",
    "load_cost_table",
    "lsape_bruteforce",
    "lsape_solve",
    "multistart_run",
    "ordered_swap",
    "parse_gxl_subset",
    "parse_text_dataset",
    "parse_text_graph",
    "permute_graph",
    "randpost",
    "run_experiment",
    "sample_node_maps",
    "swap_apply",
    "swap_cost_localized",
    "swap_cost_naive",
    "update_scores",
    "validate_node_map",
]
