import itertools
import random

import pytest

from lipsat.instances import random_smooth_semigroup
from lipsat.semigroup import (
    AffineSemigroup,
    Box,
    SemigroupError,
    SmoothnessError,
    below_set,
    bounds,
    check_smooth,
    enumerate_box_members,
    semigroup_contains,
    semigroup_decomposition,
)


def test_check_smooth_examples(campillo_gap):
    assert check_smooth(campillo_gap).ok
    r = check_smooth(AffineSemigroup.of([(2, 0), (0, 2), (1, 1)]))
    assert not r.ok and r.group_index == 2 and "group index 2" in r.diagnostics
    r = check_smooth(AffineSemigroup.of([(2, 0), (1, 1)]))
    assert not r.ok and r.missing_axes == (1,)
    assert "axis 2 carries no generator" in r.diagnostics


def test_construction_rejects_bad_generators():
    with pytest.raises(SemigroupError):
        AffineSemigroup.of([(0, 0), (1, 0)])
    with pytest.raises(SemigroupError):
        AffineSemigroup.of([(-1, 2)])
    with pytest.raises(SemigroupError):
        AffineSemigroup.of([])
    G = AffineSemigroup.of([(1, 0), (0, 1), (1, 0)])
    assert G.generators == ((1, 0), (0, 1))


def test_semigroup_contains_examples(campillo_gap):
    assert not semigroup_contains(campillo_gap, (2, 2))
    assert semigroup_contains(campillo_gap, (0, 0))
    for g in campillo_gap.generators:
        assert semigroup_contains(campillo_gap, g)
    with pytest.raises(SemigroupError):
        semigroup_contains(campillo_gap, (-1, 0))


def exhaustive_members(gens, q):
    """All nonnegative combinations with coefficient sum <= sum(q) that land on q."""
    budget = sum(q)
    for total in range(budget + 1):
        for c in itertools.product(range(total + 1), repeat=len(gens)):
            if sum(c) != total:
                continue
            if tuple(sum(k * g[j] for k, g in zip(c, gens)) for j in range(len(q))) == tuple(q):
                return True
    return False


def test_semigroup_contains_matches_exhaustive_enumeration():
    rng = random.Random(2)
    for _ in range(60):
        d = rng.randint(1, 3)
        gens = list({tuple(rng.randint(0, 8) for _ in range(d)) for _ in range(rng.randint(1, 3))})
        gens = [g for g in gens if any(g)] or [tuple([1] * d)]
        G = AffineSemigroup.of(gens)
        q = tuple(rng.randint(0, 6) for _ in range(d))
        got = semigroup_contains(G, q)
        assert got == exhaustive_members(G.generators, q)
        dec = semigroup_decomposition(G, q)
        assert (dec is not None) == got
        if dec:
            assert min(dec) >= 0
            assert tuple(sum(k * g[j] for k, g in zip(dec, G.generators)) for j in range(d)) == q


def test_bounds_examples(campillo_gap, key_example):
    b, c, B = bounds(campillo_gap)
    assert (b, c, B.bound) == ((1, 3), (3, 5), (4, 8))
    b, c, B = bounds(key_example)
    assert (b, c, B.bound) == ((4, 4), (13, 11), (17, 15))
    b, c, B = bounds(AffineSemigroup.of([(1, 0, 0), (0, 1, 0), (0, 0, 1)]))
    assert b == c == (1, 1, 1) and B.bound == (2, 2, 2)
    with pytest.raises(SmoothnessError):
        bounds(AffineSemigroup.of([(2, 0), (0, 2), (1, 1)]))


def test_bound_box_is_b_plus_c():
    rng = random.Random(4)
    for _ in range(30):
        G = random_smooth_semigroup(rng, rng.randint(2, 3), rng.randint(2, 6))
        b, c, B = bounds(G)
        assert B.bound == tuple(x + y for x, y in zip(b, c))
        for i in range(G.dim):
            axis = [g[i] for g in G.generators if sum(g) == g[i]]
            assert b[i] == min(axis)
            assert c[i] == max(g[i] for g in G.generators)


def test_below_set_examples(campillo_step, campillo_gap):
    assert below_set(campillo_step, (3, 1)) == {(0, 0), (1, 1), (2, 0), (3, 0), (3, 1)}
    assert below_set(campillo_step, (0, 0)) == {(0, 0)}
    assert below_set(campillo_gap, (0, 2)) == {(0, 0)}


def test_below_set_is_downward_slice():
    rng = random.Random(6)
    for _ in range(25):
        G = random_smooth_semigroup(rng, rng.randint(2, 3), rng.randint(2, 5))
        m = tuple(rng.randint(0, 7) for _ in range(G.dim))
        got = below_set(G, m)
        box = itertools.product(*(range(x + 1) for x in m))
        assert got == {x for x in box if semigroup_contains(G, x)}


def test_enumerate_box_members_examples(campillo_gap, key_example):
    plane = AffineSemigroup.of([(1, 0), (0, 1)])
    assert enumerate_box_members(plane, Box((2, 2))) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    members = enumerate_box_members(campillo_gap, Box((4, 8)))
    assert (3, 2) in members and (2, 2) not in members
    _, _, B = bounds(key_example)
    assert (10, 8) not in enumerate_box_members(key_example, B)
    # no nonnegative representation of (10,8): coefficient budget 18/4 over the generators
    assert not exhaustive_members(
        [g for g in key_example.generators if g[0] <= 10 and g[1] <= 8], (10, 8)
    )


def test_box_is_downward_closed():
    B = Box((3, 4, 2))
    pts = {tuple(p) for p in B.points().tolist()}
    assert len(pts) == B.size == 24
    for p in pts:
        for q in itertools.product(*(range(x + 1) for x in p)):
            assert q in B
    assert (3, 0, 0) not in B
    with pytest.raises(ValueError):
        Box((0, 2))
