"""Exit criteria. Each test prints one ``ACCEPTANCE <n> PASS|FAIL`` line.

Runtimes are wall-clock inside the test process.
"""

import cmath
import dataclasses
import json
import random
import time

import numpy as np
import pytest

from lipsat import _kernels
from lipsat.cli import main
from lipsat.instances import CAMPILLO_GAP, CAMPILLO_STEP, KEY_EXAMPLE, random_smooth_semigroup
from lipsat.intlin import Character, lattice_contains, lattice_from_generators, separating_character
from lipsat.polyhedra import NewtonPolyhedron, newton_contains
from lipsat.saturation import (
    SaturationContext,
    bruteforce_box_mask,
    campillo_closure,
    campillo_mask,
    gamma_m,
    gamma_s_contains,
    member_mask,
    verify_certificate,
)
from lipsat.semigroup import below_set, bounds, box_member_mask

SEED = 4321


def report(n, ok, detail=""):
    line = f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'} {detail}".rstrip()
    print("\n" + line)
    return ok


@pytest.fixture
def say(capsys):
    def _say(n, ok, detail=""):
        with capsys.disabled():
            report(n, ok, detail)
        assert ok, f"criterion {n} failed: {detail}"

    return _say


def random_instances(count, seed):
    rng = random.Random(seed)
    out = []
    for k in range(count):
        d = 2 + k % 2
        out.append(random_smooth_semigroup(rng, d, rng.randint(2, 6), max_coord=8))
    return out


@pytest.fixture(scope="module")
def sweep():
    """Pruned and brute-force member masks plus Campillo closures over the bound box, 200 instances."""
    t0 = time.perf_counter()
    rows = []
    for G in random_instances(200, SEED):
        _, _, B = bounds(G)
        pruned = member_mask(G, B)
        brute = bruteforce_box_mask(G, B)
        camp, _ = campillo_mask(G, B)
        rows.append((G, B, pruned, brute, camp))
    return rows, time.perf_counter() - t0


def test_1_key_example(say, tmp_path, capsys):
    t0 = time.perf_counter()
    out = tmp_path / "r.json"
    f = tmp_path / "key.json"
    f.write_text(json.dumps({"dim": 2, "generators": [list(g) for g in KEY_EXAMPLE.generators]}))
    code = main(["check", str(f), "--point", "10,8", "--out", str(out)])
    verdict = json.loads(out.read_text())["results"]["verdict"]
    p = KEY_EXAMPLE.generators  # p1..p7 at indices 0..6
    L1237 = lattice_from_generators(2, [p[0], p[1], p[2], p[6]])
    L124 = lattice_from_generators(2, [p[0], p[1], p[3]])
    N = NewtonPolyhedron.of
    checks = [
        code == 0 and verdict["member"] is True,
        L1237.basis == ((2, 0), (0, 2)),
        L124.basis == ((1, 0), (0, 4)),
        not newton_contains(N([p[2], p[6], p[4], p[5]]), (10, 8)),
        not newton_contains(N([p[3]]), (10, 8)),
        newton_contains(N([p[2], p[3]]), (10, 8)),
    ]
    elapsed = time.perf_counter() - t0
    say(1, all(checks) and elapsed < 1.0, f"checks={checks} runtime={elapsed:.3f}s (<1s)")


def test_2_campillo_differs(say, tmp_path):
    t0 = time.perf_counter()
    f = tmp_path / "gap.json"
    f.write_text(json.dumps({"dim": 2, "generators": [list(g) for g in CAMPILLO_GAP.generators]}))
    out = tmp_path / "r.json"
    code = main(["diff", str(f), "--out", str(out)])
    res = json.loads(out.read_text())["results"]
    _, _, B = bounds(CAMPILLO_GAP)
    in_sat = gamma_s_contains(CAMPILLO_GAP, (2, 2)).member
    in_camp = (2, 2) in campillo_closure(CAMPILLO_GAP, B).members
    elapsed = time.perf_counter() - t0
    ok = code == 0 and res["box"] == [4, 8] and [2, 2] in res["diff"] and in_sat and not in_camp
    say(2, ok and elapsed < 1.0, f"diff={res['diff']} runtime={elapsed:.3f}s (<1s)")


def test_3_campillo_step(say):
    m = (3, 1)
    below = below_set(CAMPILLO_STEP, m)
    L = gamma_m(CAMPILLO_STEP, m)
    _, _, B = bounds(CAMPILLO_STEP)
    ok = (
        below == {(0, 0), (1, 1), (2, 0), (3, 0), (3, 1)}
        and L.basis == ((1, 0), (0, 1))
        and (3, 2) in campillo_closure(CAMPILLO_STEP, B).members
        and gamma_s_contains(CAMPILLO_STEP, (3, 2)).member
    )
    say(3, ok, f"below={sorted(below)} lattice={L.basis}")


def test_4_bounds(say):
    b, c, B = bounds(CAMPILLO_GAP)
    say(4, (b, c, B.bound) == ((1, 3), (3, 5), (4, 8)), f"b={b} c={c} bound={B.bound}")


def test_5_oracle_equivalence(say, sweep):
    rows, elapsed = sweep
    mismatches = sum(int((pruned != brute).sum()) for _, _, pruned, brute, _ in rows)
    points = sum(B.size for _, B, *_ in rows)
    say(
        5,
        mismatches == 0 and len(rows) == 200 and elapsed < 300,
        f"instances={len(rows)} points={points} mismatches={mismatches} runtime={elapsed:.1f}s (<300s)",
    )


def additive(mask, shape):
    M = mask.reshape(shape)
    for x in np.argwhere(M):
        if not any(x):
            continue
        dst = tuple(slice(int(a), int(b)) for a, b in zip(x, shape))
        src = tuple(slice(0, int(b - a)) for a, b in zip(x, shape))
        if (M[src] & ~M[dst]).any():
            return False
    return True


def test_6_inclusion_chain_and_additivity(say, sweep):
    rows, _ = sweep
    bad_chain = bad_add = 0
    for G, B, pruned, _, camp in rows:
        gamma = box_member_mask(G, B)
        if (gamma & ~camp).any() or (camp & ~pruned).any():
            bad_chain += 1
        if not additive(pruned, B.bound):
            bad_add += 1
    say(6, bad_chain == bad_add == 0, f"chain violations={bad_chain} additivity violations={bad_add}")


def test_7_generating_set(say):
    t0 = time.perf_counter()
    failures = 0
    for G in random_instances(50, SEED + 1):
        _, _, B = bounds(G)
        big = B.scaled(2)
        direct = member_mask(G, big)
        pts = big.points()
        gens = [p for p in pts[direct] if any(p) and tuple(p) in B]
        spanned = _kernels.reachable(big.bound, np.array(gens, dtype=np.int64))
        failures += int(not np.array_equal(spanned, direct))
    elapsed = time.perf_counter() - t0
    say(7, failures == 0 and elapsed < 600, f"instances=50 failures={failures} runtime={elapsed:.1f}s (<600s)")


def _mutations(G, verdict, rng):
    """Certificates that are wrong by construction."""
    q = verdict.point
    out = []
    if verdict.kind == "witness":
        wit = verdict.witness
        out.append(dataclasses.replace(verdict, witness=dataclasses.replace(wit, support=tuple(-x for x in wit.support))))
        out.append(dataclasses.replace(verdict, witness=dataclasses.replace(wit, support=(0,) * G.dim)))
        # a unit vector on which some subset generator does not exceed q
        for i in wit.subset:
            j = next((j for j in range(G.dim) if G.generators[i][j] <= q[j]), None)
            if j is not None:
                e = tuple(int(k == j) for k in range(G.dim))
                out.append(dataclasses.replace(verdict, witness=dataclasses.replace(wit, support=e)))
                break
        # w: clear the denominator of <w, q> so q becomes trivial
        den = wit.character(q).denominator
        w2 = Character(tuple(x * den for x in wit.character.w))
        out.append(dataclasses.replace(verdict, witness=dataclasses.replace(wit, character=w2)))
    elif verdict.kind == "transcript":
        for k, o in enumerate(verdict.offending):
            if o.coefficients:
                coeffs = dict(o.coefficients)
                j = rng.choice(sorted(coeffs))
                coeffs[j] += rng.choice([-1, 1])
                offs = list(verdict.offending)
                offs[k] = dataclasses.replace(o, coefficients=coeffs)
                out.append(dataclasses.replace(verdict, offending=tuple(offs)))
            if o.support is not None:
                offs = list(verdict.offending)
                offs[k] = dataclasses.replace(o, support=tuple(-x for x in o.support))
                out.append(dataclasses.replace(verdict, offending=tuple(offs)))
    elif verdict.kind == "semigroup":
        c = list(verdict.coefficients)
        j = rng.randrange(len(c))
        c[j] += 1
        out.append(dataclasses.replace(verdict, coefficients=tuple(c)))
    return out


def test_8_certificates(say, tmp_path, capsys):
    cli_codes = []
    for k, G in enumerate([KEY_EXAMPLE, CAMPILLO_GAP, CAMPILLO_STEP]):
        f = tmp_path / f"g{k}.json"
        f.write_text(json.dumps({"dim": G.dim, "generators": [list(g) for g in G.generators]}))
        runs = [["saturate", str(f)], ["diff", str(f)]] + [
            ["check", str(f), "--point", ",".join(map(str, p)), "--witness"]
            for p in [(10, 8), (2, 2), (3, 2), (1, 1), (0, 1)]
        ]
        for j, run in enumerate(runs):
            out = tmp_path / f"r{k}_{j}.json"
            main(run + ["--out", str(out)])
            cli_codes.append(main(["verify", str(out)]))
    capsys.readouterr()
    rng = random.Random(SEED + 2)
    semigroups = [KEY_EXAMPLE, CAMPILLO_GAP, CAMPILLO_STEP] + random_instances(20, SEED + 3)
    verified = rejected_ok = 0
    failed = []
    pool = []
    for G in semigroups:
        _, _, B = bounds(G)
        ctx = SaturationContext(G)
        for p in B.points().tolist():
            v = gamma_s_contains(G, p, ctx)
            if verify_certificate(G, p, v):
                verified += 1
            else:
                failed.append((G.generators, p))
            pool.extend((G, m) for m in _mutations(G, v, rng))
    kinds = {}
    for G, m in pool:
        kinds.setdefault(m.kind, []).append((G, m))
    picked = []
    while len(picked) < 100:
        for k in sorted(kinds):
            if kinds[k] and len(picked) < 100:
                picked.append(kinds[k].pop(rng.randrange(len(kinds[k]))))
    for G, m in picked:
        rejected_ok += not verify_certificate(G, m.point, m)
    say(
        8,
        not failed and rejected_ok == 100 and not any(cli_codes),
        f"cli reports verified={cli_codes.count(0)}/{len(cli_codes)} verdicts verified={verified} failed={len(failed)} mutations rejected={rejected_ok}/100",
    )


def test_9_character_numerics(say):
    rng = random.Random(SEED + 4)
    worst_in, best_out, made = 0.0, float("inf"), 0
    while made < 100:
        d = rng.randint(1, 4)
        gens = [tuple(rng.randint(-8, 8) for _ in range(d)) for _ in range(rng.randint(0, 5))]
        q = tuple(rng.randint(-12, 12) for _ in range(d))
        L = lattice_from_generators(d, gens)
        if lattice_contains(L, q):
            continue
        w = separating_character(L, q)
        made += 1
        a = [cmath.exp(2j * cmath.pi * float(x)) for x in w.w]

        def power(x):
            out = 1
            for ak, xk in zip(a, x):
                out *= ak**xk
            return out

        for g in list(gens) + list(L.basis):
            worst_in = max(worst_in, abs(power(g) - 1))
        best_out = min(best_out, abs(power(q) - 1))
    say(9, worst_in < 1e-9 and best_out > 1e-3, f"max|a^g-1|={worst_in:.2e} min|a^q-1|={best_out:.3e}")
