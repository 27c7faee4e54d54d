"""Affine semigroups in N^d with smooth normalization, and their bound box."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .intlin import DimensionError, IntVector, lattice_from_generators


class SemigroupError(ValueError):
    pass


class SmoothnessError(SemigroupError):
    """The normalization of the semigroup is not N^d."""

    def __init__(self, report: "SmoothnessReport"):
        super().__init__("; ".join(report.diagnostics))
        self.report = report


@dataclass(frozen=True)
class AffineSemigroup:
    """``N<p_1, ..., p_n>`` inside ``N^dim``; generators are deduplicated in order."""

    dim: int
    generators: tuple[IntVector, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise SemigroupError("dimension must be positive")
        gens = []
        for g in self.generators:
            g = tuple(int(x) for x in g)
            if len(g) != self.dim:
                raise DimensionError(f"generator {g} does not have length {self.dim}")
            if any(x < 0 for x in g):
                raise SemigroupError(f"generator {g} has a negative entry")
            if not any(g):
                raise SemigroupError("the zero vector is not a generator")
            if g not in gens:
                gens.append(g)
        if not gens:
            raise SemigroupError("at least one generator is required")
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def of(cls, generators: Iterable[Sequence[int]], name: str | None = None) -> "AffineSemigroup":
        gens = [tuple(g) for g in generators]
        if not gens:
            raise SemigroupError("at least one generator is required")
        return cls(len(gens[0]), tuple(gens), name)

    @property
    def n(self) -> int:
        return len(self.generators)

    def matrix(self) -> np.ndarray:
        return np.array(self.generators, dtype=np.int64)


@dataclass(frozen=True)
class Box:
    """``{x in N^d : x_i < bound_i}``."""

    bound: IntVector

    def __post_init__(self) -> None:
        b = tuple(int(x) for x in self.bound)
        if not b or any(x <= 0 for x in b):
            raise ValueError("box bounds must be positive")
        object.__setattr__(self, "bound", b)

    @property
    def dim(self) -> int:
        return len(self.bound)

    @property
    def size(self) -> int:
        return int(np.prod(self.bound))

    def __contains__(self, x: Sequence[int]) -> bool:
        return len(x) == self.dim and all(0 <= a < b for a, b in zip(x, self.bound))

    def points(self) -> np.ndarray:
        return _kernels.box_points(self.bound)

    def flat_index(self, x: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(int(a) for a in x), self.bound))

    def dominates(self, other: "Box") -> bool:
        return all(a >= b for a, b in zip(self.bound, other.bound))

    def scaled(self, k: int) -> "Box":
        return Box(tuple(k * b for b in self.bound))


@dataclass(frozen=True)
class SmoothnessReport:
    ok: bool
    missing_axes: tuple[int, ...]
    group_index: int | None  # None when the generators do not span a full-rank group
    diagnostics: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def check_smooth(G: AffineSemigroup) -> SmoothnessReport:
    """Every axis carries a generator and the generators span ``Z^d``."""
    missing = tuple(
        i
        for i in range(G.dim)
        if not any(g[i] > 0 and sum(g) == g[i] for g in G.generators)
    )
    index = lattice_from_generators(G.dim, G.generators).index()
    diags = [f"axis {i + 1} carries no generator" for i in missing]
    if index is None:
        diags.append("generators do not span a full-rank group")
    elif index != 1:
        diags.append(f"group index {index}")
    return SmoothnessReport(not diags, missing, index, tuple(diags))


def require_smooth(G: AffineSemigroup) -> None:
    report = check_smooth(G)
    if not report:
        raise SmoothnessError(report)


def _as_point(G: AffineSemigroup, q: Sequence[int]) -> IntVector:
    q = tuple(int(x) for x in q)
    if len(q) != G.dim:
        raise DimensionError(f"point {q} does not have length {G.dim}")
    if any(x < 0 for x in q):
        raise SemigroupError(f"point {q} has a negative coordinate")
    return q


def _reach_below(G: AffineSemigroup, m: IntVector) -> np.ndarray:
    bound = tuple(x + 1 for x in m)
    return _kernels.reachable(bound, G.matrix()).reshape(bound)


def semigroup_contains(G: AffineSemigroup, q: Sequence[int]) -> bool:
    q = _as_point(G, q)
    return bool(_reach_below(G, q)[q])


def semigroup_decomposition(G: AffineSemigroup, q: Sequence[int]) -> IntVector | None:
    """Nonnegative coefficients over ``G.generators`` summing to ``q``, or None."""
    q = _as_point(G, q)
    reach = _reach_below(G, q)
    if not reach[q]:
        return None
    coeffs = [0] * G.n
    x = q
    while any(x):
        for i, g in enumerate(G.generators):
            y = tuple(a - b for a, b in zip(x, g))
            if min(y) >= 0 and reach[y]:
                coeffs[i] += 1
                x = y
                break
        else:  # pragma: no cover - reach guarantees a predecessor
            raise AssertionError("broken reachability table")
    return tuple(coeffs)


def bounds(G: AffineSemigroup) -> tuple[IntVector, IntVector, Box]:
    """``(b, c, box)``: least axis heights, largest generator coordinates, ``box = b + c``."""
    require_smooth(G)
    b = tuple(
        min(g[i] for g in G.generators if g[i] > 0 and sum(g) == g[i]) for i in range(G.dim)
    )
    c = tuple(max(g[i] for g in G.generators) for i in range(G.dim))
    return b, c, Box(tuple(x + y for x, y in zip(b, c)))


def below_set(G: AffineSemigroup, m: Sequence[int]) -> set[IntVector]:
    """``{g in G : g <= m}``."""
    m = _as_point(G, m)
    reach = _reach_below(G, m)
    return {tuple(int(x) for x in p) for p in np.argwhere(reach)}


def box_member_mask(G: AffineSemigroup, box: Box) -> np.ndarray:
    """Flat C-order mask of ``G`` inside ``box`` from one reachability sweep."""
    if box.dim != G.dim:
        raise DimensionError("box and semigroup dimensions differ")
    return _kernels.reachable(box.bound, G.matrix())


def enumerate_box_members(G: AffineSemigroup, box: Box) -> set[IntVector]:
    mask = box_member_mask(G, box)
    pts = box.points()[mask]
    return {tuple(int(x) for x in p) for p in pts}
