"""Matroid intersection solvers under independence and rank oracles.

Every oracle call is counted, so the query complexity of each algorithm can
be measured directly and compared against its proven bound.
"""

from .augsets import (
    AugmentingSet,
    PartialAugSet,
    apply_augmenting_set,
    default_gap_threshold,
    hybrid_phase,
    partial_to_full,
    peel_paths,
    refine_to_fixpoint,
    solve_approx_augset,
    validate_augmenting_set,
)
from .bench import (
    ALGORITHMS,
    BenchConfig,
    RunRecord,
    execute_run,
    run_algorithm,
    run_grid,
    write_csv,
    write_plot_data,
)
from .core import (
    INF,
    CapabilityError,
    GraphicMatroid,
    IndependenceOnlyView,
    LinearMatroid,
    Matroid,
    OracleStats,
    PartitionMatroid,
    RankIndependenceView,
    RestrictedMatroid,
    SolveResult,
    TruncatedMatroid,
    UniformMatroid,
    elements_of,
    greedy_linear_opt,
    greedy_maximal_common,
    make_matroid,
    mask_of,
    matroid_spec,
    restrict,
    truncate,
    verify_common,
)
from .exchange import SINK, SOURCE, find_exchange, find_free, out_arc
from .fractional import (
    FractionalPoint,
    SparsifyPlan,
    estimate_rbar,
    frank_wolfe_fractional,
    solve_approx_sparse,
    sparsify,
)
from .indep_solver import (
    carry_bounds,
    get_distances_indep,
    one_path,
    solve_exact_indep,
)
from .instances import FAMILIES, Instance, generate, path_matching_instance
from .rank_solver import (
    block_flow,
    get_distances_rank,
    solve_approx_rank,
    solve_exact_rank,
)
from .reference import brute_force_max_common, brute_force_rank, solve_reference
from .verify import verify_instance

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "AugmentingSet",
    "BenchConfig",
    "CapabilityError",
    "FAMILIES",
    "FractionalPoint",
    "GraphicMatroid",
    "INF",
    "IndependenceOnlyView",
    "Instance",
    "LinearMatroid",
    "Matroid",
    "OracleStats",
    "PartialAugSet",
    "PartitionMatroid",
    "RankIndependenceView",
    "RestrictedMatroid",
    "RunRecord",
    "SINK",
    "SOURCE",
    "SolveResult",
    "SparsifyPlan",
    "TruncatedMatroid",
    "UniformMatroid",
    "apply_augmenting_set",
    "block_flow",
    "brute_force_max_common",
    "brute_force_rank",
    "carry_bounds",
    "default_gap_threshold",
    "elements_of",
    "estimate_rbar",
    "execute_run",
    "find_exchange",
    "find_free",
    "frank_wolfe_fractional",
    "generate",
    "get_distances_indep",
    "get_distances_rank",
    "greedy_linear_opt",
    "greedy_maximal_common",
    "hybrid_phase",
    "make_matroid",
    "mask_of",
    "matroid_spec",
    "one_path",
    "out_arc",
    "partial_to_full",
    "path_matching_instance",
    "peel_paths",
    "refine_to_fixpoint",
    "restrict",
    "run_algorithm",
    "run_grid",
    "solve_approx_augset",
    "solve_approx_rank",
    "solve_approx_sparse",
    "solve_exact_indep",
    "solve_exact_rank",
    "solve_reference",
    "sparsify",
    "truncate",
    "validate_augmenting_set",
    "verify_common",
    "verify_instance",
    "write_csv",
    "write_plot_data",
]
