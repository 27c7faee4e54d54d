"""Exact integer linear algebra: Hermite/Smith normal forms, lattices, characters.

Vectors are tuples of Python ints and matrices are tuples of such rows, so no
intermediate result can overflow. numpy only appears in the batched lattice
test, where the entries are known to be small.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

IntVector = tuple[int, ...]
IntMatrix = tuple[IntVector, ...]


class DimensionError(ValueError):
    """Raised when vector lengths disagree with the ambient dimension."""


def _as_rows(M: Iterable[Sequence[int]]) -> list[list[int]]:
    rows = [[int(x) for x in r] for r in M]
    if rows and len({len(r) for r in rows}) != 1:
        raise DimensionError("matrix rows have different lengths")
    return rows


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _freeze(rows: list[list[int]]) -> IntMatrix:
    return tuple(tuple(r) for r in rows)


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    """Exact product of two integer matrices given as row sequences."""
    if not A:
        return ()
    cols = list(zip(*B)) if B else []
    if len(A[0]) != len(B):
        raise DimensionError("inner dimensions differ")
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


def det(M: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    a = _as_rows(M)
    n = len(a)
    if any(len(r) != n for r in a):
        raise DimensionError("det needs a square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hnf(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``H = U @ M``, ``U`` unimodular, pivots positive,
    entries above each pivot reduced into ``[0, pivot)`` and zero rows last.
    """
    A = _as_rows(M)
    m = len(A)
    n = len(A[0]) if A else 0
    U = _identity(m)
    r = 0
    for j in range(n):
        if r == m:
            break
        # Euclid on column j among rows r..m-1 until a single nonzero entry remains.
        while True:
            nz = [i for i in range(r, m) if A[i][j] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(A[i][j]))
            if p != r:
                A[p], A[r] = A[r], A[p]
                U[p], U[r] = U[r], U[p]
            done = True
            for i in range(r + 1, m):
                if A[i][j]:
                    f = A[i][j] // A[r][j]
                    A[i] = [x - f * y for x, y in zip(A[i], A[r])]
                    U[i] = [x - f * y for x, y in zip(U[i], U[r])]
                    if A[i][j]:
                        done = False
            if done:
                break
        if r < m and A[r][j] != 0:
            if A[r][j] < 0:
                A[r] = [-x for x in A[r]]
                U[r] = [-x for x in U[r]]
            piv = A[r][j]
            for i in range(r):
                f = A[i][j] // piv
                if f:
                    A[i] = [x - f * y for x, y in zip(A[i], A[r])]
                    U[i] = [x - f * y for x, y in zip(U[i], U[r])]
            r += 1
    return _freeze(A), _freeze(U)


def snf(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``D = U @ M @ V`` with ``d_1 | d_2 | ...``.

    ``U`` and ``V`` are unimodular; diagonal entries are nonnegative.
    """
    A = _as_rows(M)
    m = len(A)
    n = len(A[0]) if A else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i: int, k: int) -> None:
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(i: int, k: int) -> None:
        for row in A:
            row[i], row[k] = row[k], row[i]
        for row in V:
            row[i], row[k] = row[k], row[i]

    def add_row(dst: int, src: int, f: int) -> None:
        A[dst] = [x + f * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst: int, src: int, f: int) -> None:
        for row in A:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            # Divisibility: fold any offending row into row t and repeat.
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < m and t < n and A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return _freeze(U), _freeze(A), _freeze(V)


@dataclass(frozen=True)
class Lattice:
    """A subgroup of ``Z^dim`` stored by its canonical row HNF basis."""

    dim: int
    basis: IntMatrix

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    def index(self) -> int | None:
        """Index ``[Z^dim : L]``, or None when the lattice is not full rank."""
        if self.rank < self.dim:
            return None
        out = 1
        for row, p in zip(self.basis, self.pivots):
            out *= row[p]
        return out

    def __contains__(self, q: Sequence[int]) -> bool:
        return lattice_contains(self, q)


def lattice_from_generators(dim: int, gens: Iterable[Sequence[int]]) -> Lattice:
    """The Z-span of ``gens`` as a canonical :class:`Lattice`."""
    rows = _as_rows(gens)
    if any(len(r) != dim for r in rows):
        raise DimensionError(f"generators must have length {dim}")
    if not rows:
        return Lattice(dim, ())
    H, _ = hnf(rows)
    return Lattice(dim, tuple(r for r in H if any(r)))


def _check_len(L: Lattice, q: Sequence[int]) -> None:
    if len(q) != L.dim:
        raise DimensionError(f"vector of length {len(q)} in dimension {L.dim}")


def lattice_coordinates(L: Lattice, q: Sequence[int]) -> IntVector | None:
    """Coefficients of ``q`` over ``L.basis`` by back-substitution, or None."""
    _check_len(L, q)
    res = [int(x) for x in q]
    coeffs = []
    col = 0
    for row, p in zip(L.basis, L.pivots):
        if any(res[col:p]):
            return None
        c, rem = divmod(res[p], row[p])
        if rem:
            return None
        coeffs.append(c)
        if c:
            res = [x - c * y for x, y in zip(res, row)]
        col = p + 1
    if any(res):
        return None
    return tuple(coeffs)


def lattice_contains(L: Lattice, q: Sequence[int]) -> bool:
    return lattice_coordinates(L, q) is not None


def express_in_generators(gens: Sequence[Sequence[int]], q: Sequence[int]) -> IntVector | None:
    """Integer coefficients ``c`` with ``sum c_i gens[i] == q``, or None.

    Empty ``gens`` spans ``{0}``.
    """
    q = tuple(int(x) for x in q)
    if not gens:
        return () if not any(q) else None
    H, U = hnf(gens)
    nonzero = [i for i, r in enumerate(H) if any(r)]
    L = Lattice(len(q), tuple(H[i] for i in nonzero))
    coords = lattice_coordinates(L, q)
    if coords is None:
        return None
    out = [0] * len(gens)
    for c, i in zip(coords, nonzero):
        for k, u in enumerate(U[i]):
            out[k] += c * u
    return tuple(out)


@dataclass(frozen=True)
class Character:
    """Rational covector ``w``; the character is ``x -> exp(2 pi i <w, x>)``."""

    w: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "w", tuple(Fraction(x) for x in self.w))

    def __call__(self, x: Sequence[int]) -> Fraction:
        return character_eval(self, x)

    def to_json(self) -> list[str]:
        return [str(x) for x in self.w]

    @classmethod
    def from_json(cls, data: Sequence[str | int]) -> "Character":
        return cls(tuple(Fraction(x) for x in data))


def character_eval(chi: Character, x: Sequence[int]) -> Fraction:
    """``<w, x>`` reduced mod 1 into ``[0, 1)``."""
    if len(chi.w) != len(x):
        raise DimensionError("character and vector lengths differ")
    return sum((a * int(b) for a, b in zip(chi.w, x)), Fraction(0)) % 1


def separating_character(L: Lattice, q: Sequence[int]) -> Character | None:
    """A character trivial on ``L`` but not on ``q``; None iff ``q`` lies in ``L``.

    With ``D = U B V`` the SNF of the basis, ``L`` is the row space of
    ``D V^-1``. For ``w = V u`` one gets ``<w, row_k(D V^-1)> = d_k u_k``, so
    ``u_k`` in ``(1/d_k) Z`` on the torsion part and arbitrary on the free
    part keeps ``w`` integral on ``L``.
    """
    _check_len(L, q)
    d = L.dim
    q = tuple(int(x) for x in q)
    if lattice_contains(L, q):
        return None
    if L.rank == 0:
        k = next(i for i, x in enumerate(q) if x)
        w = [Fraction(0)] * d
        w[k] = Fraction(1, 2 * q[k])
        return Character(tuple(w))
    _, D, V = snf(L.basis)
    y = [sum(q[i] * V[i][k] for i in range(d)) for k in range(d)]
    u = [Fraction(0)] * d
    for k in range(d):
        dk = D[k][k] if k < L.rank else 0
        if dk and y[k] % dk:
            u[k] = Fraction(1, dk)
            break
        if not dk and y[k]:
            u[k] = Fraction(1, 2 * y[k])
            break
    else:  # pragma: no cover - excluded by the membership test above
        raise AssertionError("no separating coordinate found")
    w = tuple(sum((V[i][k] * u[k] for k in range(d)), Fraction(0)) for i in range(d))
    return Character(w)


class LatticeMask:
    """Vectorized membership test for many points of a fixed lattice.

    Uses the SNF coordinates: ``x`` is in ``L`` iff ``(x V)_k`` is divisible
    by ``d_k`` for ``k < rank`` and vanishes for ``k >= rank``.
    """

    def __init__(self, L: Lattice):
        self.lattice = L
        d = L.dim
        if L.rank:
            _, D, V = snf(L.basis)
            mods = [D[k][k] for k in range(L.rank)] + [0] * (d - L.rank)
        else:
            V = _freeze(_identity(d))
            mods = [0] * d
        self._V = np.array(V, dtype=np.int64).reshape(d, d)
        self._mods = np.array(mods, dtype=np.int64)
        self._free = self._mods == 0
        self._safe = np.where(self._free, 1, self._mods)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=np.int64).reshape(-1, self.lattice.dim)
        y = pts @ self._V
        ok = np.where(self._free, y == 0, y % self._safe == 0)
        return ok.all(axis=1)
