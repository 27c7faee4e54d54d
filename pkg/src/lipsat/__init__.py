"""Lipschitz saturation of affine semigroups with smooth normalization."""

__version__ = "0.1.0"

from .intlin import (
    Character,
    Lattice,
    character_eval,
    hnf,
    lattice_contains,
    lattice_from_generators,
    separating_character,
    snf,
)
from .polyhedra import NewtonPolyhedron, lp_feasible, newton_contains, support_witness
from .saturation import (
    CampilloResult,
    MembershipVerdict,
    SaturationResult,
    campillo_closure,
    diff_campillo,
    gamma_m,
    gamma_s_contains,
    gamma_s_contains_bruteforce,
    lipschitz_generators,
    non_membership_witness,
    verify_certificate,
)
from .semigroup import (
    AffineSemigroup,
    Box,
    below_set,
    bounds,
    check_smooth,
    enumerate_box_members,
    semigroup_contains,
)

__all__ = [
    "__version__",
    "AffineSemigroup",
    "Box",
    "CampilloResult",
    "Character",
    "Lattice",
    "MembershipVerdict",
    "NewtonPolyhedron",
    "SaturationResult",
    "below_set",
    "bounds",
    "campillo_closure",
    "character_eval",
    "check_smooth",
    "diff_campillo",
    "enumerate_box_members",
    "gamma_m",
    "gamma_s_contains",
    "gamma_s_contains_bruteforce",
    "hnf",
    "lattice_contains",
    "lattice_from_generators",
    "lipschitz_generators",
    "lp_feasible",
    "newton_contains",
    "non_membership_witness",
    "semigroup_contains",
    "separating_character",
    "snf",
    "support_witness",
    "verify_certificate",
]
