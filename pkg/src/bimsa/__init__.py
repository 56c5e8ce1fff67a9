"""Budgeted influence maximization on directed social graphs.

Pick a seed set maximizing expected independent-cascade spread subject to a
total activation-cost budget. The main solver anneals over a single
cost-effective candidate set with ensemble voting and an adaptive interrupt;
CELF, MaxDegree, and a two-set annealer are included as baselines, plus a
Monte-Carlo spread evaluator with an exact enumeration oracle for tiny graphs.
"""

from ._kernels import BACKEND as kernel_backend
from .baselines import (
    BillboardHandbill,
    build_billboard_handbill,
    celf_bim_solve,
    combination_sa_solve,
    max_degree_solve,
)
from .candidate import CandidateSet, build_candidates, t_reachability_report
from .diffusion import (
    ICParams,
    SpreadEstimate,
    estimate_spread,
    exact_spread,
    simulate_ic_once,
)
from .graph import (
    DegreePartition,
    DirectedGraph,
    GraphGenerationError,
    GraphParseError,
    generate_powerlaw_graph,
    load_edge_list,
    partition_by_outdegree,
    write_edge_list,
)
from .harness import ExperimentConfig, run_beta_sweep, run_cost_sensitivity, run_experiment, run_init_comparison
from .indicators import (
    CostModel,
    cedv_node,
    degree_score,
    edv_set,
    node_cost,
    sigma2_node,
    sigma2_set,
)
from .sa import (
    RunReport,
    SAConfig,
    SeedSet,
    VoteTally,
    boost_sa_solve,
    neighbor_set,
    random_seed_set,
    sa_initialize,
    vote_update,
)

__version__ = "0.1.0"

__all__ = [
    "BillboardHandbill",
    "CandidateSet",
    "CostModel",
    "DegreePartition",
    "DirectedGraph",
    "ExperimentConfig",
    "GraphGenerationError",
    "GraphParseError",
    "ICParams",
    "RunReport",
    "SAConfig",
    "SeedSet",
    "SpreadEstimate",
    "VoteTally",
    "boost_sa_solve",
    "build_billboard_handbill",
    "build_candidates",
    "cedv_node",
    "celf_bim_solve",
    "combination_sa_solve",
    "degree_score",
    "edv_set",
    "estimate_spread",
    "exact_spread",
    "generate_powerlaw_graph",
    "kernel_backend",
    "load_edge_list",
    "max_degree_solve",
    "neighbor_set",
    "node_cost",
    "partition_by_outdegree",
    "random_seed_set",
    "run_beta_sweep",
    "run_cost_sensitivity",
    "run_experiment",
    "run_init_comparison",
    "sa_initialize",
    "sigma2_node",
    "sigma2_set",
    "simulate_ic_once",
    "t_reachability_report",
    "vote_update",
    "write_edge_list",
]
