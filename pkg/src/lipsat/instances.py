"""Random smooth semigroups and the worked examples, for tests and benchmarks."""

from __future__ import annotations

import random

from .semigroup import AffineSemigroup, check_smooth

# p1..p7, order matters: tests index generators by position.
KEY_EXAMPLE = AffineSemigroup.of(
    [(4, 0), (0, 4), (4, 10), (13, 4), (13, 10), (13, 11), (6, 10)], name="key-example"
)
# u, v^3, v^4, v^5, u^3 v, u^3 v^2
CAMPILLO_GAP = AffineSemigroup.of(
    [(1, 0), (0, 3), (0, 4), (0, 5), (3, 1), (3, 2)], name="campillo-gap"
)
CAMPILLO_STEP = AffineSemigroup.of(
    [(0, 3), (0, 4), (0, 5), (2, 0), (3, 0), (1, 1), (1, 4)], name="campillo-step"
)


def random_smooth_semigroup(
    rng: random.Random,
    dim: int,
    n: int,
    max_coord: int = 8,
    max_axis: int = 5,
) -> AffineSemigroup:
    """``n`` random generators in ``[0, max_coord]^dim``, repaired to be smooth.

    Axes without a generator receive one of random height ``<= max_axis``;
    draws whose group is still not ``Z^dim`` are rejected and redrawn.
    """
    while True:
        gens: list[tuple[int, ...]] = []
        while len(gens) < n:
            g = tuple(rng.randint(0, max_coord) for _ in range(dim))
            if any(g) and g not in gens:
                gens.append(g)
        for i in range(dim):
            if not any(g[i] > 0 and sum(g) == g[i] for g in gens):
                h = rng.randint(1, max_axis)
                gens.append(tuple(h if k == i else 0 for k in range(dim)))
        G = AffineSemigroup.of(gens)
        if check_smooth(G):
            return G
