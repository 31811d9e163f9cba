"""Popular branchings in preference-labelled digraphs."""

from .arborescence import (
    CostedGraph,
    LaminarFamily,
    laminar_dual,
    max_cardinality_branching,
    min_cost_arborescence,
)
from .factor import low_factor_arborescence
from .generators import (
    PrefModel,
    assignment_to_branching,
    complete_top_instance,
    four_cycle_instance,
    hampath_to_branching,
    matching_to_certificate,
    random_instance,
    reduce_3dm,
    reduce_3sat,
    reduce_hampath,
    star_instance,
    tight_factor_instance,
)
from .instance import (
    Branching,
    Instance,
    RootedInstance,
    augment_root,
    branching_from_edges,
    from_orders,
    parse_instance,
    project,
    root_at,
    serialize_instance,
    to_arborescence,
)
from .mixed import MixedBranching, popular_mixed_branching, separate_membership, separate_popularity
from .oracle import brute_min_factor, brute_min_margin, brute_popular, enumerate_branchings
from .polytope import build_dstar, emit_extended_lp, emit_face_lp, is_popular_structural, min_cost_popular_branching
from .popularity import (
    compare_branchings,
    is_popular,
    unpopularity_factor,
    unpopularity_margin,
    validate_certificate,
)
from .solver import build_contraction, min_margin_arborescence, popular_arborescence

__version__ = "0.1.0"

__all__ = [
    "Branching",
    "CostedGraph",
    "Instance",
    "LaminarFamily",
    "MixedBranching",
    "PrefModel",
    "RootedInstance",
    "assignment_to_branching",
    "augment_root",
    "branching_from_edges",
    "brute_min_factor",
    "brute_min_margin",
    "brute_popular",
    "build_contraction",
    "build_dstar",
    "compare_branchings",
    "complete_top_instance",
    "emit_extended_lp",
    "emit_face_lp",
    "enumerate_branchings",
    "four_cycle_instance",
    "from_orders",
    "hampath_to_branching",
    "is_popular",
    "is_popular_structural",
    "laminar_dual",
    "low_factor_arborescence",
    "matching_to_certificate",
    "max_cardinality_branching",
    "min_cost_arborescence",
    "min_cost_popular_branching",
    "min_margin_arborescence",
    "parse_instance",
    "popular_arborescence",
    "popular_mixed_branching",
    "project",
    "random_instance",
    "reduce_3dm",
    "reduce_3sat",
    "reduce_hampath",
    "root_at",
    "separate_membership",
    "separate_popularity",
    "serialize_instance",
    "star_instance",
    "tight_factor_instance",
    "to_arborescence",
    "unpopularity_factor",
    "unpopularity_margin",
    "validate_certificate",
]
