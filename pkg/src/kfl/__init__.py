"""Branched covers of the torus and the finiteness type of kernel groups.

Monodromy models of branched covers of an elliptic curve, their induced
maps on first homology, equivalence of those maps under integer symplectic
changes of basis, and finiteness-type reports for kernels of product maps
onto Z^t.
"""

from .covers import (
    Branch,
    Lattice2,
    MonodromyRep,
    genus,
    image_lattice,
    is_connected,
    is_purely_branched,
    make_cyclic,
    make_kfold,
    validate,
)
from .equivalence import (
    EquivalenceVerdict,
    FalsifyReport,
    RMatrix,
    build_r,
    decide,
    decide_canonical,
    falsify_bounded,
    proof_decomposition,
    r_invertible_all_signs,
    refined_rank_check,
    search_witness,
    unimodular_2x2,
)
from .errors import InvalidInputError, KflError, ResourceLimitError
from .finiteness import (
    ClassificationVerdict,
    FinitenessReport,
    ProductFibration,
    build_phi,
    build_psi,
    classify_products,
    finiteness_report,
    is_surjective,
)
from .homology import (
    H1Map,
    NotCanonical,
    SpElement,
    canonical_form,
    induced_h1,
    j_matrix,
    orientation_flip,
    pair_permutation_matrix,
    sp_generator_labels,
    sp_generators,
    symplectic_sign,
    transvection,
)
from .matrices import Matrix
from .perm import Permutation, commutator, parse_cycle_string

__version__ = "0.1.0"
