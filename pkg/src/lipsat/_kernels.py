"""Hot loops over box grids, compiled with numba when available.

Every kernel has a pure-numpy twin. Set ``LIPSAT_NUMBA=0`` to force the numpy
path (useful for debugging and for the benchmark in ``benchmarks/``). All
arithmetic is int64 on small exponent vectors, so both paths are exact.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("LIPSAT_NUMBA", "1").lower() not in ("0", "off", "false")


def box_strides(bound: np.ndarray) -> np.ndarray:
    """C-order strides (in elements) of a grid with shape ``bound``."""
    d = len(bound)
    strides = np.ones(d, dtype=np.int64)
    for i in range(d - 2, -1, -1):
        strides[i] = strides[i + 1] * bound[i + 1]
    return strides


def box_points(bound) -> np.ndarray:
    """All points of ``[0, bound)`` as a ``(N, d)`` int64 array in C order."""
    bound = tuple(int(b) for b in bound)
    return np.indices(bound, dtype=np.int64).reshape(len(bound), -1).T.copy()


# --- semigroup reachability -------------------------------------------------


def _reachable_numpy(bound: np.ndarray, gens: np.ndarray, seed: np.ndarray) -> np.ndarray:
    reach = seed.reshape(tuple(bound)).copy()
    while True:
        new = reach.copy()
        for g in gens:
            if np.any(g >= bound):
                continue
            src = tuple(slice(0, int(b - x)) for b, x in zip(bound, g))
            dst = tuple(slice(int(x), int(b)) for b, x in zip(bound, g))
            new[dst] |= reach[src]
        if np.array_equal(new, reach):
            return reach.ravel()
        reach = new


def _reachable_loop(bound, gens, seed):
    d = bound.shape[0]
    strides = np.ones(d, dtype=np.int64)
    for i in range(d - 2, -1, -1):
        strides[i] = strides[i + 1] * bound[i + 1]
    total = strides[0] * bound[0]
    offs = np.zeros(gens.shape[0], dtype=np.int64)
    for g in range(gens.shape[0]):
        for i in range(d):
            offs[g] += gens[g, i] * strides[i]
    reach = seed.copy()
    x = np.zeros(d, dtype=np.int64)
    for f in range(total):
        rem = f
        for i in range(d):
            x[i] = rem // strides[i]
            rem -= x[i] * strides[i]
        if reach[f]:
            continue
        for g in range(gens.shape[0]):
            ok = True
            for i in range(d):
                if gens[g, i] > x[i]:
                    ok = False
                    break
            if ok and reach[f - offs[g]]:
                reach[f] = True
                break
    return reach


if USE_NUMBA:
    _reachable_loop = njit(cache=True)(_reachable_loop)


def reachable(bound, gens, seed=None) -> np.ndarray:
    """Flat boolean mask of ``seed + N<gens>`` inside the box ``[0, bound)``.

    The default seed is the origin, which gives the semigroup generated by
    ``gens`` intersected with the box. Generators must be nonnegative and
    nonzero.
    """
    bound = np.asarray(bound, dtype=np.int64)
    gens = np.asarray(gens, dtype=np.int64).reshape(-1, len(bound))
    if seed is None:
        seed = np.zeros(int(np.prod(bound)), dtype=np.bool_)
        seed[0] = True
    seed = np.asarray(seed, dtype=np.bool_)
    if USE_NUMBA:
        return _reachable_loop(bound, gens, seed)
    return _reachable_numpy(bound, gens, seed)


# --- support-table sweeps ---------------------------------------------------


def _violation_masks_numpy(points, normals, heights):
    # mask[p, v] has bit i set iff <p_i, v> > <q_p, v>
    qv = points @ normals.T
    out = np.zeros(qv.shape, dtype=np.int64)
    for i in range(heights.shape[0]):
        out |= (heights[i][None, :] > qv).astype(np.int64) << i
    return out


def _violation_masks_loop(points, normals, heights):
    P, d = points.shape
    k = normals.shape[0]
    n = heights.shape[0]
    out = np.zeros((P, k), dtype=np.int64)
    for p in range(P):
        for v in range(k):
            s = 0
            for j in range(d):
                s += points[p, j] * normals[v, j]
            m = 0
            for i in range(n):
                if heights[i, v] > s:
                    m |= np.int64(1) << i
            out[p, v] = m
    return out


def _subset_offending_numpy(masks, subset):
    return np.any((masks & subset) == subset, axis=1)


def _subset_offending_loop(masks, subset):
    P, k = masks.shape
    out = np.zeros(P, dtype=np.bool_)
    for p in range(P):
        for v in range(k):
            if masks[p, v] & subset == subset:
                out[p] = True
                break
    return out


if USE_NUMBA:
    _violation_masks_loop = njit(cache=True)(_violation_masks_loop)
    _subset_offending_loop = njit(cache=True)(_subset_offending_loop)


def violation_masks(points, normals, heights) -> np.ndarray:
    """Bitmasks ``A[p, v] = {i : <p_i, v> > <q_p, v>}`` for each point and normal."""
    points = np.ascontiguousarray(points, dtype=np.int64)
    normals = np.ascontiguousarray(normals, dtype=np.int64)
    heights = np.ascontiguousarray(heights, dtype=np.int64)
    if heights.shape[0] > 62:
        raise ValueError("at most 62 points per support table")
    if USE_NUMBA:
        return _violation_masks_loop(points, normals, heights)
    return _violation_masks_numpy(points, normals, heights)


def subset_offending(masks, subset: int) -> np.ndarray:
    """Per point: does some normal put every point of ``subset`` strictly above it."""
    masks = np.ascontiguousarray(masks, dtype=np.int64)
    if USE_NUMBA:
        return _subset_offending_loop(masks, np.int64(subset))
    return _subset_offending_numpy(masks, np.int64(subset))
