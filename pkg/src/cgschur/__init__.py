"""Exact construction, verification, duality, and decomposition of
Schur rings over finite products of Galois rings of coprime
characteristics."""

from .cgring import CGRing, ideal_ring, make_cg_ring, parse_ring_spec, quotient
from .classify import (
    Decomposition,
    FalsificationError,
    check_nondense_structure,
    check_quotient_purity,
    classify_rational,
    decompose_pure,
    reassemble,
)
from .construct import (
    ConstructionError,
    all_subgroups,
    build_nonpure_dense_sring,
    subgroup_generated,
)
from .duality import (
    character_table,
    check_duality,
    dual_sring,
    perp_of_ideal,
    separation_check,
)
from .galois import GaloisRing, make_galois_ring
from .sring import (
    PartitionError,
    SRing,
    StructureError,
    cyclotomic,
    is_tensor_over,
    quotient_sring,
    restrict,
    schur_closure,
    sring_from_doc,
    tensor,
    verify_sring,
    wreath_pairs,
)
