"""Newton polyhedra over the nonnegative orthant.

Two independent routes decide ``q in Conv(p_i + R^d_{>=0})``:

* :func:`newton_contains` solves the feasibility LP exactly (Bland's rule over
  :class:`fractions.Fraction`) and :func:`support_witness` turns the Farkas
  certificate into an integer support vector.
* :class:`SupportTable` precomputes a finite set of nonnegative integer
  normals containing every facet normal of every sub-polyhedron, so
  membership for a whole box reduces to integer comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .intlin import DimensionError, IntVector, det

RationalVector = tuple[Fraction, ...]


class MalformedSystemError(ValueError):
    pass


@dataclass(frozen=True)
class LPResult:
    feasible: bool
    certificate: RationalVector

    def __iter__(self):
        return iter((self.feasible, self.certificate))


def lp_feasible(
    A: Sequence[Sequence[Fraction | int]],
    b: Sequence[Fraction | int],
    eq_rows: Iterable[int] = (),
) -> LPResult:
    """Decide ``exists x >= 0`` with ``A x = b`` on ``eq_rows`` and ``A x >= b`` elsewhere.

    Phase-one simplex in exact arithmetic with Bland's rule. When feasible the
    certificate is a feasible ``x``; otherwise it is a Farkas vector ``y``
    (nonnegative on inequality rows) with ``y A <= 0`` and ``y b > 0``.
    """
    rows = [[Fraction(x) for x in r] for r in A]
    rhs = [Fraction(x) for x in b]
    m = len(rows)
    if len(rhs) != m:
        raise MalformedSystemError("A and b have different row counts")
    n = len(rows[0]) if rows else 0
    if any(len(r) != n for r in rows):
        raise MalformedSystemError("A is not rectangular")
    eq = set(eq_rows)
    if not eq <= set(range(m)):
        raise MalformedSystemError("equality row index out of range")
    if m == 0:
        return LPResult(True, (Fraction(0),) * n)

    ge = [i for i in range(m) if i not in eq]
    n_surplus = len(ge)
    sign = [1 if rhs[i] >= 0 else -1 for i in range(m)]
    # columns: x (n) | surplus (n_surplus) | artificial (m)
    ncol = n + n_surplus + m
    T = []
    for i in range(m):
        row = [sign[i] * x for x in rows[i]]
        row += [Fraction(0)] * (n_surplus + m)
        if i in eq:
            pass
        else:
            row[n + ge.index(i)] = Fraction(-sign[i])
        row[n + n_surplus + i] = Fraction(1)
        row.append(sign[i] * rhs[i])
        T.append(row)
    basis = [n + n_surplus + i for i in range(m)]
    cost = [Fraction(0)] * (n + n_surplus) + [Fraction(1)] * m
    # reduced costs r_j = c_j - sum_i c_B(i) T[i][j]
    red = [cost[j] - sum(T[i][j] for i in range(m)) for j in range(ncol)]
    obj = sum(T[i][-1] for i in range(m))

    while True:
        enter = next((j for j in range(ncol) if red[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                key = (T[i][-1] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # pragma: no cover - phase one is bounded below by 0
            raise AssertionError("phase-one LP unbounded")
        r = best[1]
        piv = T[r][enter]
        T[r] = [x / piv for x in T[r]]
        for i in range(m):
            if i != r and T[i][enter]:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        f = red[enter]
        red = [x - f * y for x, y in zip(red, T[r][:ncol])]
        obj += f * T[r][-1]
        basis[r] = enter

    if obj == 0:
        x = [Fraction(0)] * ncol
        for i, j in enumerate(basis):
            x[j] = T[i][-1]
        return LPResult(True, tuple(x[:n]))
    # Duals of the flipped system sit in the artificial reduced costs: y'_i = 1 - r_i.
    y = tuple(sign[i] * (1 - red[n + n_surplus + i]) for i in range(m))
    return LPResult(False, y)


@dataclass(frozen=True)
class NewtonPolyhedron:
    """``Conv(p_i + R^d_{>=0})`` for a nonempty set of integer points."""

    dim: int
    points: tuple[IntVector, ...]

    def __post_init__(self) -> None:
        pts = tuple(dict.fromkeys(tuple(int(x) for x in p) for p in self.points))
        if not pts:
            raise ValueError("a Newton polyhedron needs at least one point")
        if any(len(p) != self.dim for p in pts):
            raise DimensionError(f"points must have length {self.dim}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, points: Iterable[Sequence[int]]) -> "NewtonPolyhedron":
        pts = [tuple(p) for p in points]
        if not pts:
            raise ValueError("a Newton polyhedron needs at least one point")
        return cls(len(pts[0]), tuple(pts))

    def __contains__(self, q: Sequence[int]) -> bool:
        return newton_contains(self, q)


def _newton_system(N: NewtonPolyhedron, q: Sequence[int]):
    # variables lambda_i >= 0; row 0: sum = 1; rows 1..d: -sum lambda_i p_i >= -q
    A = [[1] * len(N.points)]
    A += [[-p[k] for p in N.points] for k in range(N.dim)]
    b = [1] + [-int(x) for x in q]
    return A, b


def _check_dim(N: NewtonPolyhedron, q: Sequence[int]) -> None:
    if len(q) != N.dim:
        raise DimensionError(f"point of length {len(q)} in dimension {N.dim}")


def newton_contains(N: NewtonPolyhedron, q: Sequence[int]) -> bool:
    """Exact membership of ``q`` in the Newton polyhedron (boundary counts as inside)."""
    _check_dim(N, q)
    if any(all(a >= b for a, b in zip(q, p)) for p in N.points):
        return True
    A, b = _newton_system(N, q)
    return lp_feasible(A, b, eq_rows=[0]).feasible


def _primitive(v: Sequence[int]) -> IntVector:
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def support_witness(N: NewtonPolyhedron, q: Sequence[int]) -> IntVector | None:
    """Primitive ``v`` in ``N^d`` with ``<q, v> < min_i <p_i, v>``; None iff ``q`` is inside."""
    _check_dim(N, q)
    A, b = _newton_system(N, q)
    feasible, y = lp_feasible(A, b, eq_rows=[0])
    if feasible:
        return None
    scale = lcm(*(x.denominator for x in y[1:]))
    v = _primitive([int(x * scale) for x in y[1:]])
    qv = sum(a * c for a, c in zip(q, v))
    assert all(x >= 0 for x in v) and any(v)
    assert qv < min(sum(a * c for a, c in zip(p, v)) for p in N.points)
    return v


def candidate_normals(points: Sequence[Sequence[int]], dim: int) -> np.ndarray:
    """Nonnegative primitive normals covering every facet of every ``N(S)``, ``S`` a subset.

    A facet of ``Conv(S) + R^d_{>=0}`` spans an affine hyperplane whose
    direction space is generated by differences of points of ``S`` and unit
    vectors. Taking cofactor normals of all independent ``(d-1)``-tuples of
    such directions and keeping the sign-definite ones gives a superset of
    the facet normals; extra nonnegative normals only add valid inequalities.
    """
    pts = [tuple(int(x) for x in p) for p in points]
    dirs = {tuple(int(i == k) for i in range(dim)) for k in range(dim)}
    for p, r in combinations(pts, 2):
        diff = _primitive([a - c for a, c in zip(p, r)])
        if any(diff):
            if next(x for x in diff if x) < 0:
                diff = tuple(-x for x in diff)
            dirs.add(diff)
    dirs = sorted(dirs)
    normals = set()
    for combo in combinations(dirs, dim - 1):
        v = [
            (-1) ** k * det([[row[j] for j in range(dim) if j != k] for row in combo])
            for k in range(dim)
        ]
        if not any(v):
            continue
        if all(x <= 0 for x in v):
            v = [-x for x in v]
        if all(x >= 0 for x in v):
            normals.add(_primitive(v))
    return np.array(sorted(normals), dtype=np.int64).reshape(-1, dim)


class SupportTable:
    """Support values ``<p_i, v>`` for all points and all candidate normals.

    ``q`` lies outside ``N(p_i | i in I)`` exactly when some normal ``v``
    satisfies ``<q, v> < <p_i, v>`` for every ``i`` in ``I``. Subsets are
    bitmasks over the point order.
    """

    def __init__(self, points: Sequence[Sequence[int]]):
        self.points = np.array(points, dtype=np.int64)
        self.n, self.dim = self.points.shape
        self.normals = candidate_normals(points, self.dim)
        self.heights = self.points @ self.normals.T

    def masks(self, qs: np.ndarray) -> np.ndarray:
        """``(P, k)`` violation bitmasks for a batch of points."""
        qs = np.asarray(qs, dtype=np.int64).reshape(-1, self.dim)
        return _kernels.violation_masks(qs, self.normals, self.heights)

    def contains(self, q: Sequence[int], subset: int) -> bool:
        """Is ``q`` inside ``N(p_i | i in subset)``; the empty subset is never entered."""
        return not bool(_kernels.subset_offending(self.masks(q), subset)[0])

    def separating_normal(self, q: Sequence[int], subset: int) -> IntVector | None:
        m = self.masks(q)[0]
        hit = np.nonzero((m & subset) == subset)[0]
        if not len(hit):
            return None
        return tuple(int(x) for x in self.normals[hit[0]])


def maximal_masks(masks: Iterable[int]) -> list[int]:
    """Inclusion-maximal bitmasks, sorted; the empty mask survives only if alone."""
    uniq = sorted(set(int(m) for m in masks), key=lambda m: -bin(m).count("1"))
    keep: list[int] = []
    for m in uniq:
        if not any(m & k == m for k in keep):
            keep.append(m)
    return sorted(keep)
