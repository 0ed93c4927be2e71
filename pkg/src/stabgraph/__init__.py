"""Graph stability workbench.

Products, two-fold (semi-)morphisms, Cartesian skeletons and instability
conditions for circulant graphs, plus an exhaustive circulant survey.
"""

from .circulant_lab import (
    EXAMPLES,
    ConditionReport,
    Construction,
    Subgroup,
    SubgroupWitness,
    TypeKind,
    TypeVerdict,
    all_conditions,
    classify_type,
    construct_example,
    equi_cross_check,
    hmm_p37,
    hmm_p312,
    hmm_t32,
    ncon_check,
    oldtonew_check,
    preserving_check,
    subgroups,
    theorem_hmmtype,
    wilson_conditions,
)
from .errors import InvalidInput, SearchBudgetExceeded, StabError
from .graph import (
    CirculantSpec,
    Graph,
    build_graph,
    circulant,
    classify_basic,
    complement,
    complete_graph,
    cycle_graph,
    isomorphism,
    parse_graph,
)
from .perm import Permutation, PermGroup, StabChain, automorphism_group, group_order
from .products import BundleMap, ProductGraph, ProductKind, direct_bundle, product
from .search import Budget
from .skeleton import boolean_square, cartesian_skeleton, dispensable
from .stability import (
    Outcome,
    SearchOutcome,
    StabilityVerdict,
    TrivialReason,
    TwoFoldPair,
    Verdict,
    double_cover,
    find_tf_morphism,
    find_tfs_morphism,
    pair_stability,
    stability_status,
    verify_two_fold,
)
from .survey import SurveyOptions, enumerate_connection_sets, survey

__all__ = [
    "EXAMPLES",
    "Budget",
    "BundleMap",
    "CirculantSpec",
    "ConditionReport",
    "Construction",
    "Graph",
    "InvalidInput",
    "Outcome",
    "PermGroup",
    "Permutation",
    "ProductGraph",
    "ProductKind",
    "SearchBudgetExceeded",
    "SearchOutcome",
    "StabChain",
    "StabError",
    "StabilityVerdict",
    "Subgroup",
    "SubgroupWitness",
    "SurveyOptions",
    "TrivialReason",
    "TwoFoldPair",
    "TypeKind",
    "TypeVerdict",
    "Verdict",
    "all_conditions",
    "automorphism_group",
    "boolean_square",
    "build_graph",
    "cartesian_skeleton",
    "circulant",
    "classify_basic",
    "classify_type",
    "complement",
    "complete_graph",
    "construct_example",
    "cycle_graph",
    "direct_bundle",
    "dispensable",
    "double_cover",
    "enumerate_connection_sets",
    "equi_cross_check",
    "find_tf_morphism",
    "find_tfs_morphism",
    "group_order",
    "hmm_p312",
    "hmm_p37",
    "hmm_t32",
    "isomorphism",
    "ncon_check",
    "oldtonew_check",
    "pair_stability",
    "parse_graph",
    "preserving_check",
    "product",
    "stability_status",
    "subgroups",
    "survey",
    "theorem_hmmtype",
    "verify_two_fold",
    "wilson_conditions",
]
