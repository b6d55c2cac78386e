"""Congruence towers of Bianchi and Kleinian groups.

Exact arithmetic in imaginary quadratic fields, PSL_2 word enumeration,
congruence-subgroup membership and indices, geodesic inventories with prime
selection, and certificates chaining injectivity radius, Heegaard genus and
ball volume along towers of congruence covers.
"""

__version__ = "0.1.0"

from .congruence import CongruenceKind, index_formula, member, surjectivity_check
from .matgroup import GroupContext, Mat2, PslElem, compute_entry_constants
from .presets import figure8, picard, preset
from .quadfield import FieldSpec, PrimeIdealData, QuadInt, QuadRat, SquareFreeIdeal
from .tower import (
    BoundCertificate,
    TowerLevel,
    build_tower_closed,
    build_tower_noncompact,
    compute_c3,
    genus_ball_certificate,
    lemma51_bound,
    verify_lemma51,
)

__all__ = [
    "CongruenceKind", "index_formula", "member", "surjectivity_check",
    "GroupContext", "Mat2", "PslElem", "compute_entry_constants",
    "figure8", "picard", "preset",
    "FieldSpec", "PrimeIdealData", "QuadInt", "QuadRat", "SquareFreeIdeal",
    "BoundCertificate", "TowerLevel", "build_tower_closed", "build_tower_noncompact",
    "compute_c3", "genus_ball_certificate", "lemma51_bound", "verify_lemma51",
]
