"""Finite-basis calculus for comb-generated multiple gaps.

Gap functions (finite color tables on direction pairs of the m-adic tree),
the reduction order between the gaps they generate, n-type enumeration with
canonical representatives, and verification of the classification facts.
"""

__version__ = "0.1.0"

from .core import (
    INF,
    GapFunction,
    apply_color_permutation,
    inc,
    meet,
    validate_gap_function,
)
from .invariants import (
    Condition1Report,
    PbranchWitness,
    attachment_profile,
    ensure_pbranch,
    is_attached,
    is_branch_reduced,
    pbranch,
)
from .reduction import (
    ReductionMap,
    brute_search_reduction,
    compose,
    identity_reduction,
    is_witness,
    search_reduction,
)
from .types import (
    NType,
    Representative,
    build_representative,
    enumerate_types,
    j_notation,
    j_string,
    permute_type,
    type_orbits,
    validate_type,
)
from .treelab import (
    FiniteComb,
    SubtreeDescriptor,
    comb_type_of,
    extract_comb,
    make_comb,
    subtree_comb_colors,
    tree_image,
)
from .classify import (
    Catalog,
    CloverWitness,
    DerivationTrace,
    classify_gap,
    clover_witness,
    derivation_witness,
    derive_type,
    gap_equivalent,
    gap_leq,
    gap_leq_witness,
    minimal_basis,
    minimal_types_below,
    representative_properties,
    verify_pairwise_incomparable,
    verify_suite,
)

__all__ = [name for name in dir() if not name.startswith("_")]
