"""Compare the numba kernels against the pure-numpy fallback.

Each backend runs in its own interpreter because ``LIPSAT_NUMBA`` is read at
import time::

    python benchmarks/bench_kernels.py            # both backends
    python benchmarks/bench_kernels.py --worker   # current backend only
"""

import argparse
import json
import os
import random
import subprocess
import sys
import time

import numpy as np


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def worker(repeat: int) -> dict:
    from lipsat import _kernels
    from lipsat.instances import random_smooth_semigroup
    from lipsat.polyhedra import SupportTable
    from lipsat.semigroup import Box, bounds

    rng = random.Random(7)
    G2 = random_smooth_semigroup(rng, 2, 6)
    G3 = random_smooth_semigroup(rng, 3, 6)
    out = {"numba": _kernels.USE_NUMBA}
    for label, G, scale in [("reach_2d", G2, 8), ("reach_3d", G3, 3)]:
        _, _, B = bounds(G)
        big = Box(tuple(scale * x for x in B.bound))
        gens = np.array(G.generators, dtype=np.int64)
        _kernels.reachable(big.bound, gens)  # compile / warm cache
        out[label] = {"box": list(big.bound), "seconds": _best(lambda: _kernels.reachable(big.bound, gens), repeat)}
    table = SupportTable(G3.generators)
    _, _, B = bounds(G3)
    pts = Box(tuple(2 * x for x in B.bound)).points()
    table.masks(pts[:10])
    out["violation_masks"] = {
        "points": len(pts),
        "normals": len(table.normals),
        "seconds": _best(lambda: table.masks(pts), repeat),
    }
    return out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--worker", action="store_true")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if args.worker:
        print(json.dumps(worker(args.repeat)))
        return
    results = {}
    for flag in ("1", "0"):
        env = dict(os.environ, LIPSAT_NUMBA=flag)
        proc = subprocess.run(
            [sys.executable, __file__, "--worker", "--repeat", str(args.repeat)],
            env=env, capture_output=True, text=True, check=True,
        )
        results["numba" if flag == "1" else "numpy"] = json.loads(proc.stdout)
    print(f"{'kernel':<18}{'size':<22}{'numba s':>10}{'numpy s':>10}{'ratio':>8}")
    for key in ("reach_2d", "reach_3d", "violation_masks"):
        a, b = results["numba"][key], results["numpy"][key]
        size = a.get("box") or f"{a['points']}x{a['normals']}"
        print(f"{key:<18}{str(size):<22}{a['seconds']:>10.4f}{b['seconds']:>10.4f}{b['seconds'] / a['seconds']:>8.1f}")


if __name__ == "__main__":
    main()
