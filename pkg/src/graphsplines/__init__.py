"""Exact computation of generalized spline modules on edge-labeled graphs."""

from .rings import (
    Ideal,
    IntegerRing,
    ModularRing,
    PrimeField,
    RationalField,
    RingElement,
    TruncatedPolynomialRing,
    ideal_membership,
    ideal_sum,
    ideals_equal,
    membership_certificate,
)
from .graphs import (
    Contraction,
    LabeledGraph,
    PlaneRootedStructure,
    contract_edges,
    compose_contractions,
    depth_first_order,
    find_bridges,
    genus,
    is_reduced,
    plane_structure,
    validate_contraction,
)
from .splinecore import (
    Spline,
    SplineModule,
    based_spline_module,
    compute_spline_module,
    indicator_in_contraction_span,
    is_flow_up,
    is_spline,
    make_spline,
    module_membership,
    split_off_constants,
    tree_flow_up_generators,
    vertex_expansion,
)
from .decomp import (
    bridge_path_decompose,
    contract_degree2_path,
    one_point_union_decompose,
    reduce_graph,
    spline_decomposition,
    wedge_flow_up_basis,
)
from .dyckseries import (
    DyckWord,
    PlaneLabeledTree,
    SeriesPrefix,
    closed_form_check,
    enumerate_dyck_words,
    guess_algebraic_relation,
    hilbert_dyck_prefix,
    marked_word_count,
    tree_to_word,
    word_to_tree,
)

__version__ = "0.1.0"
