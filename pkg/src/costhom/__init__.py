"""Valued CSP / minimum-cost digraph homomorphism equivalence toolkit."""

from .costs import (
    Cost,
    INF,
    ZERO,
    Constraint,
    ScopeBlock,
    VCSPInstance,
    WeightedRelation,
    WeightedStructure,
    collapse_to_single_relation,
    direct_product,
    eval_instance,
    feas,
    rewrite_over_collapsed,
)
from .digraphs import (
    Digraph,
    Fan,
    FanOptimum,
    Infeasible,
    LeveledDigraph,
    NoOptimisationImpact,
    OrientedPath,
    build_fan,
    build_q_path,
    compute_levels,
    fan_min_cost,
    gamma,
    internal_components,
    path_csp_satisfiable,
)
from .encoding import (
    EncodedDigraph,
    EncodingViolation,
    build_encoding,
    is_rigid_core_pair,
    verify_encoding,
)
from .oracles import (
    SearchBudget,
    brute_force_mch,
    brute_force_vcsp,
    enumerate_homomorphisms,
    verify_equivalence,
)
from .reductions import (
    BPrime,
    FixedNo,
    FixedYes,
    MinCostHomInstance,
    ReducedVCSP,
    backward_reduce,
    forward_reduce,
    stage1_check,
    stage2_short_components,
    stage3a_build_bprime,
    stage3b_build_instance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
