"""Membership in the Lipschitz saturation of an affine semigroup with smooth normalization.

A point ``q`` of ``N^d`` lies in the saturation iff for every subset ``I`` of
generator indices with ``q`` outside ``N(p_i | i in I)``, ``q`` is an integer
combination of the generators outside ``I`` (or ``q = 0``). Subsets are
handled as bitmasks over ``G.generators``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Sequence

import numpy as np

from . import _kernels
from .intlin import (
    Character,
    IntVector,
    Lattice,
    LatticeMask,
    express_in_generators,
    lattice_contains,
    lattice_from_generators,
    separating_character,
)
from .polyhedra import (
    NewtonPolyhedron,
    SupportTable,
    maximal_masks,
    newton_contains,
    support_witness,
)
from .semigroup import (
    AffineSemigroup,
    Box,
    SemigroupError,
    _as_point,
    below_set,
    bounds,
    box_member_mask,
    check_smooth,
    require_smooth,
    semigroup_contains,
    semigroup_decomposition,
)

log = logging.getLogger(__name__)


def bits(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def to_mask(indices: Sequence[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


# --- verdicts ---------------------------------------------------------------


@dataclass(frozen=True)
class OffendingSubset:
    """A subset ``I`` with ``q`` outside ``N(I)``, plus ``q`` written over the complement."""

    subset: tuple[int, ...]
    support: IntVector | None  # None only for the empty subset
    coefficients: dict[int, int]  # generator index -> integer coefficient


@dataclass(frozen=True)
class NonMemberWitness:
    subset: tuple[int, ...]
    support: IntVector
    character: Character


@dataclass(frozen=True)
class MembershipVerdict:
    """Answer plus a certificate that :func:`verify_certificate` can recheck.

    ``kind`` is one of ``"zero"``, ``"semigroup"`` (``coefficients`` is a
    nonnegative decomposition over the generators), ``"transcript"`` (all
    maximal offending subsets with their lattice representations) or
    ``"witness"`` (non-member).
    """

    point: IntVector
    member: bool
    kind: str
    coefficients: IntVector | None = None
    offending: tuple[OffendingSubset, ...] = ()
    witness: NonMemberWitness | None = None

    def __bool__(self) -> bool:
        return self.member

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"point": list(self.point), "member": self.member, "kind": self.kind}
        if self.coefficients is not None:
            out["coefficients"] = list(self.coefficients)
        if self.kind == "transcript":
            out["offending"] = [
                {
                    "subset": list(o.subset),
                    "support": None if o.support is None else list(o.support),
                    "coefficients": {str(k): v for k, v in sorted(o.coefficients.items())},
                }
                for o in self.offending
            ]
        if self.witness is not None:
            out["witness"] = {
                "subset": list(self.witness.subset),
                "support": list(self.witness.support),
                "character": self.witness.character.to_json(),
            }
        return out

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "MembershipVerdict":
        wit = data.get("witness")
        return cls(
            point=tuple(int(x) for x in data["point"]),
            member=bool(data["member"]),
            kind=str(data["kind"]),
            coefficients=(
                tuple(int(x) for x in data["coefficients"]) if "coefficients" in data else None
            ),
            offending=tuple(
                OffendingSubset(
                    tuple(int(i) for i in o["subset"]),
                    None if o["support"] is None else tuple(int(x) for x in o["support"]),
                    {int(k): int(v) for k, v in o["coefficients"].items()},
                )
                for o in data.get("offending", ())
            ),
            witness=(
                None
                if wit is None
                else NonMemberWitness(
                    tuple(int(i) for i in wit["subset"]),
                    tuple(int(x) for x in wit["support"]),
                    Character.from_json(wit["character"]),
                )
            ),
        )


class NotANonMemberError(ValueError):
    pass


# --- pruned engine ----------------------------------------------------------


class SaturationContext:
    """Per-semigroup tables shared by all membership queries.

    Holds the support table of the generators and memoizes the lattice
    spanned by the complement of each subset. Read-only once built, apart
    from the memo, so it is cheap to ship to worker processes.
    """

    def __init__(self, G: AffineSemigroup):
        require_smooth(G)
        self.G = G
        self.full = (1 << G.n) - 1
        self.table = SupportTable(G.generators)
        self._lattices: dict[int, Lattice] = {}

    def complement_lattice(self, subset: int) -> Lattice:
        comp = self.full & ~subset
        L = self._lattices.get(comp)
        if L is None:
            L = lattice_from_generators(self.G.dim, [self.G.generators[i] for i in bits(comp)])
            self._lattices[comp] = L
        return L

    def maximal_offending(self, q: Sequence[int], masks: np.ndarray | None = None) -> list[int]:
        """Inclusion-maximal subsets ``I`` with ``q`` outside ``N(I)``."""
        if masks is None:
            masks = self.table.masks(q)[0]
        return maximal_masks(masks)

    def decide(self, q: IntVector, masks: np.ndarray | None = None) -> bool:
        """Membership only, no certificate."""
        if not any(q):
            return True
        return all(
            lattice_contains(self.complement_lattice(I), q)
            for I in self.maximal_offending(q, masks)
        )


def gamma_s_contains(
    G: AffineSemigroup, q: Sequence[int], context: SaturationContext | None = None
) -> MembershipVerdict:
    """Decide membership and attach a certificate.

    Offending subsets are downward closed and the lattice condition gets
    stronger as ``I`` grows, so only maximal offending subsets are checked.
    """
    ctx = context or SaturationContext(G)
    q = _as_point(G, q)
    if not any(q):
        return MembershipVerdict(q, True, "zero")
    dec = semigroup_decomposition(G, q)
    if dec is not None:
        return MembershipVerdict(q, True, "semigroup", coefficients=dec)
    found = []
    for I in ctx.maximal_offending(q):
        comp = bits(ctx.full & ~I)
        coeffs = express_in_generators([G.generators[i] for i in comp], q)
        if coeffs is None:
            return MembershipVerdict(q, False, "witness", witness=_witness(ctx, q, I))
        found.append(
            OffendingSubset(
                bits(I),
                ctx.table.separating_normal(q, I) if I else None,
                {i: c for i, c in zip(comp, coeffs) if c},
            )
        )
    return MembershipVerdict(q, True, "transcript", offending=tuple(found))


def _witness(ctx: SaturationContext, q: IntVector, I: int) -> NonMemberWitness:
    G = ctx.G
    idx = bits(I)
    v = support_witness(NewtonPolyhedron.of([G.generators[i] for i in idx]), q)
    w = separating_character(ctx.complement_lattice(I), q)
    assert v is not None and w is not None
    return NonMemberWitness(idx, v, w)


def non_membership_witness(
    G: AffineSemigroup, q: Sequence[int], context: SaturationContext | None = None
) -> tuple[tuple[int, ...], IntVector, Character]:
    """``(I, v, w)``: offending subset, support vector and separating character."""
    verdict = gamma_s_contains(G, q, context)
    if verdict.member:
        raise NotANonMemberError(f"{tuple(q)} belongs to the saturation")
    wit = verdict.witness
    return wit.subset, wit.support, wit.character


def gamma_s_contains_bruteforce(G: AffineSemigroup, q: Sequence[int]) -> bool:
    """Literal evaluation over all ``2^n`` subsets with the exact LP. Test oracle."""
    require_smooth(G)
    q = _as_point(G, q)
    if not any(q):
        return True
    n = G.n
    for r in range(n + 1):
        for I in combinations(range(n), r):
            inside = bool(I) and newton_contains(
                NewtonPolyhedron.of([G.generators[i] for i in I]), q
            )
            if inside:
                continue
            comp = [G.generators[i] for i in range(n) if i not in I]
            if not lattice_contains(lattice_from_generators(G.dim, comp), q):
                return False
    return True


def bruteforce_box_mask(G: AffineSemigroup, box: Box) -> np.ndarray:
    """Literal all-subsets evaluation over a whole box, vectorized per subset.

    Uses the support table for the polyhedron test and one lattice mask per
    complement. Shares no code with the pruned search beyond those primitives.
    """
    require_smooth(G)
    table = SupportTable(G.generators)
    pts = box.points()
    masks = table.masks(pts)
    ok = ~np.any(pts != 0, axis=1)
    member = np.ones(len(pts), dtype=bool)
    full = (1 << G.n) - 1
    for I in range(full + 1):
        offending = _kernels.subset_offending(masks, I)
        comp = [G.generators[i] for i in range(G.n) if not I >> i & 1]
        in_lattice = LatticeMask(lattice_from_generators(G.dim, comp))(pts)
        member &= ~offending | in_lattice | ok
    return member


# --- box sweeps -------------------------------------------------------------


def _decide_chunk(args) -> np.ndarray:
    G, pts = args
    ctx = SaturationContext(G)
    return _decide_points(ctx, pts)


def _decide_points(ctx: SaturationContext, pts: np.ndarray) -> np.ndarray:
    masks = ctx.table.masks(pts)
    out = np.zeros(len(pts), dtype=bool)
    for k, p in enumerate(pts):
        out[k] = ctx.decide(tuple(int(x) for x in p), masks[k])
    return out


def member_mask(
    G: AffineSemigroup,
    box: Box,
    context: SaturationContext | None = None,
    jobs: int = 1,
) -> np.ndarray:
    """Flat C-order mask of saturation members in ``box`` (pruned search per point)."""
    ctx = context or SaturationContext(G)
    pts = box.points()
    out = box_member_mask(G, box).copy()
    todo = np.nonzero(~out)[0]
    if jobs > 1 and len(todo) > 64:
        chunks = np.array_split(todo, jobs * 4)
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = ex.map(_decide_chunk, [(G, pts[c]) for c in chunks])
            for c, r in zip(chunks, results):
                out[c] = r
    else:
        out[todo] = _decide_points(ctx, pts[todo])
    return out


def _mask_to_set(box: Box, mask: np.ndarray) -> set[IntVector]:
    return {tuple(int(x) for x in p) for p in box.points()[mask]}


@dataclass(frozen=True)
class SaturationResult:
    box: Box
    bound_box: Box
    members: frozenset[IntVector]
    generators: frozenset[IntVector]

    def sorted_generators(self) -> list[IntVector]:
        return sorted(self.generators)


def lipschitz_generators(
    G: AffineSemigroup, box: Box | None = None, jobs: int = 1
) -> SaturationResult:
    """Members of the saturation in ``box`` (default: the bound box) and the generating set inside the bound box."""
    _, _, B = bounds(G)
    box = box or B
    ctx = SaturationContext(G)
    members = _mask_to_set(box, member_mask(G, box, ctx, jobs))
    if box.dominates(B):
        gens = {x for x in members if x in B}
    else:
        gens = _mask_to_set(B, member_mask(G, B, ctx, jobs))
    return SaturationResult(box, B, frozenset(members), frozenset(gens))


# --- Campillo closure -------------------------------------------------------


def gamma_m(G: AffineSemigroup, m: Sequence[int]) -> Lattice:
    """The lattice spanned by ``{g in G : g <= m}``; ``m`` must lie in ``G``."""
    m = _as_point(G, m)
    if not semigroup_contains(G, m):
        raise SemigroupError(f"{m} is not in the semigroup")
    return lattice_from_generators(G.dim, sorted(below_set(G, m)))


def _atoms(shape: tuple[int, ...], S: np.ndarray) -> list[IntVector]:
    """Irreducible nonzero elements of a box-truncated semigroup, by graded sweep."""
    pts = [tuple(int(x) for x in p) for p in np.argwhere(S)]
    pts.sort(key=lambda p: (sum(p), p))
    atoms: list[IntVector] = []
    reach = np.zeros(int(np.prod(shape)), dtype=bool)
    reach[0] = True
    for p in pts:
        if not any(p):
            continue
        if not reach[np.ravel_multi_index(p, shape)]:
            atoms.append(p)
            reach = _kernels.reachable(shape, np.array(atoms, dtype=np.int64), reach)
    return atoms


@dataclass(frozen=True)
class CampilloResult:
    box: Box
    members: frozenset[IntVector]
    iterations: int


def campillo_mask(G: AffineSemigroup, box: Box) -> tuple[np.ndarray, int]:
    """Fixpoint of ``S <- N<S u (m + Gamma_m(S))>`` inside ``box``.

    ``Gamma_m(S)`` is recomputed from the current ``S`` each round. The
    lattice spanned by ``S`` below ``m`` equals the span of the atoms of
    ``S`` below ``m``, which keeps the per-``m`` work to a lattice lookup.
    """
    require_smooth(G)
    shape = box.bound
    S = box_member_mask(G, box).reshape(shape)
    grid = box.points()
    rounds = 0
    while True:
        rounds += 1
        atoms = _atoms(shape, S)
        atom_arr = np.array(atoms, dtype=np.int64).reshape(-1, len(shape))
        lattice_masks: dict[bytes, np.ndarray] = {}
        new = S.copy()
        ms = np.argwhere(S)
        order = np.lexsort((*ms.T[::-1], (ms * ms).sum(axis=1)))
        for m in ms[order]:
            below = np.all(atom_arr <= m, axis=1)
            key = below.tobytes()
            lm = lattice_masks.get(key)
            if lm is None:
                L = lattice_from_generators(len(shape), [atoms[i] for i in np.nonzero(below)[0]])
                lm = LatticeMask(L)(grid).reshape(shape)
                lattice_masks[key] = lm
            dst = tuple(slice(int(a), int(b)) for a, b in zip(m, shape))
            src = tuple(slice(0, int(b - a)) for a, b in zip(m, shape))
            new[dst] |= lm[src]
        added = new & ~S
        if not added.any():
            log.debug("campillo closure stable after %d rounds", rounds)
            return S.ravel(), rounds
        gens = np.vstack([atom_arr, np.argwhere(added)])
        S = _kernels.reachable(shape, gens).reshape(shape) | new


def campillo_closure(G: AffineSemigroup, box: Box) -> CampilloResult:
    mask, rounds = campillo_mask(G, box)
    return CampilloResult(box, frozenset(_mask_to_set(box, mask)), rounds)


def diff_campillo(G: AffineSemigroup, box: Box, jobs: int = 1) -> set[IntVector]:
    """Saturation members in ``box`` that the Campillo closure does not reach."""
    camp, _ = campillo_mask(G, box)
    sat = member_mask(G, box, jobs=jobs)
    return _mask_to_set(box, sat & ~camp)


# --- certificate checking ---------------------------------------------------


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _valid_subset(G: AffineSemigroup, subset: Sequence[int]) -> bool:
    return all(0 <= i < G.n for i in subset) and len(set(subset)) == len(subset)


def verify_certificate(G: AffineSemigroup, q: Sequence[int], verdict: MembershipVerdict) -> bool:
    """Recheck every claim in ``verdict`` from scratch; False on any discrepancy."""
    try:
        q = _as_point(G, q)
        if not check_smooth(G) or tuple(verdict.point) != q:
            return False
        if verdict.kind == "zero":
            return verdict.member and not any(q)
        if verdict.kind == "semigroup":
            c = verdict.coefficients
            if not verdict.member or c is None or len(c) != G.n or min(c) < 0:
                return False
            return tuple(sum(k * g[j] for k, g in zip(c, G.generators)) for j in range(G.dim)) == q
        if verdict.kind == "witness":
            return not verdict.member and _check_witness(G, q, verdict.witness)
        if verdict.kind == "transcript":
            return verdict.member and _check_transcript(G, q, verdict.offending)
    except (ValueError, TypeError, ZeroDivisionError):
        return False
    return False


def _check_witness(G: AffineSemigroup, q: IntVector, wit: NonMemberWitness | None) -> bool:
    if wit is None or not wit.subset or not _valid_subset(G, wit.subset):
        return False
    v = wit.support
    if len(v) != G.dim or min(v) < 0 or not any(v):
        return False
    if not _dot(q, v) < min(_dot(G.generators[i], v) for i in wit.subset):
        return False
    w = wit.character
    if len(w.w) != G.dim:
        return False
    comp = [g for i, g in enumerate(G.generators) if i not in wit.subset]
    if any(w(g) != 0 for g in comp):
        return False
    return w(q) != 0


def _check_transcript(G: AffineSemigroup, q: IntVector, offending) -> bool:
    recorded = []
    for o in offending:
        if not _valid_subset(G, o.subset):
            return False
        if o.subset:
            v = o.support
            if v is None or len(v) != G.dim or min(v) < 0 or not any(v):
                return False
            if not _dot(q, v) < min(_dot(G.generators[i], v) for i in o.subset):
                return False
        if any(i in o.subset or not 0 <= i < G.n for i in o.coefficients):
            return False
        combo = [0] * G.dim
        for i, c in o.coefficients.items():
            for j in range(G.dim):
                combo[j] += c * G.generators[i][j]
        if tuple(combo) != q:
            return False
        recorded.append(to_mask(o.subset))
    # Completeness: every subset not covered by a recorded one must contain q
    # in its polyhedron. Indices with q >= p_i make any subset containing
    # them harmless; among the rest only minimal uncovered subsets need the LP.
    live = [i for i, g in enumerate(G.generators) if not all(a >= b for a, b in zip(q, g))]

    def covered(mask: int) -> bool:
        return any(mask & r == mask for r in recorded)

    for r in range(len(live) + 1):
        for combo in combinations(live, r):
            mask = to_mask(combo)
            if covered(mask):
                continue
            if any(not covered(mask & ~(1 << i)) for i in combo):
                continue
            if not combo:
                return False
            if not newton_contains(NewtonPolyhedron.of([G.generators[i] for i in combo]), q):
                return False
    return True
