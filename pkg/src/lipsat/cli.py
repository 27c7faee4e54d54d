"""``lipsat`` command line.

Exit codes: 0 success (or member), 1 non-member / failed verification,
2 input error. Diagnostics go to stderr, controlled by ``LIPSAT_LOG``
(off, info, debug).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .io import InputError, digest, load_semigroup, parse_vector, semigroup_json
from .plot import render_svg
from .saturation import (
    MembershipVerdict,
    SaturationContext,
    campillo_closure,
    diff_campillo,
    gamma_s_contains,
    lipschitz_generators,
    verify_certificate,
)
from .semigroup import AffineSemigroup, Box, SemigroupError, SmoothnessError, bounds, check_smooth

log = logging.getLogger("lipsat")

EXIT_OK, EXIT_NO, EXIT_INPUT = 0, 1, 2


def _setup_logging() -> None:
    level = os.environ.get("LIPSAT_LOG", "").lower()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("lipsat: %(levelname)s: %(message)s"))
    root = logging.getLogger("lipsat")
    root.handlers[:] = [handler]
    root.propagate = False
    root.setLevel(
        {"off": logging.CRITICAL + 1, "info": logging.INFO, "debug": logging.DEBUG}.get(
            level, logging.WARNING
        )
    )


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lipsat",
        description="Lipschitz saturation of affine semigroups with smooth normalization.",
    )
    p.add_argument("--version", action="version", version=f"lipsat {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file", help="semigroup file (JSON or one generator per line)")
        sp.add_argument("--format", choices=["json", "text"], default="json")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for box sweeps")
        return sp

    sp = add("check", "decide membership of one point")
    sp.add_argument("--point", required=True, help="comma-separated coordinates")
    sp.add_argument("--witness", action="store_true", help="attach a non-membership witness")
    for name, help in [
        ("saturate", "generators of the saturation inside the bound box"),
        ("campillo", "Campillo closure inside a box"),
        ("diff", "saturation points missed by the Campillo closure"),
    ]:
        sp = add(name, help)
        sp.add_argument("--box", help="box bound a,b,...; defaults to the bound box")
    sp = add("plot", "SVG diagram of a planar semigroup")
    sp.add_argument("--box", help="box bound a,b; defaults to the bound box")
    add("info", "smoothness diagnostics and bounds")
    sp = sub.add_parser("verify", help="recheck every certificate in a report")
    sp.add_argument("file", help="report produced by check, saturate or diff")
    sp.add_argument("--format", choices=["json", "text"], default="text")
    return p


def _box(G: AffineSemigroup, text: str | None) -> Box:
    _, _, B = bounds(G)
    if text is None:
        return B
    box = Box(parse_vector(text, G.dim, "box"))
    if not box.dominates(B):
        log.warning(
            "box %s does not dominate the bound box %s; generating-set guarantees do not apply",
            list(box.bound),
            list(B.bound),
        )
    return box


def _points(pts) -> list[list[int]]:
    return [list(p) for p in sorted(pts)]


def _report(command: str, argv: Sequence[str], G: AffineSemigroup, results: dict, t0: float):
    inp = semigroup_json(G)
    inp["sha256"] = digest(G)
    return {
        "tool": "lipsat",
        "version": __version__,
        "command": command,
        "argv": list(argv),
        "input": inp,
        "results": results,
        "timing": {"seconds": round(time.perf_counter() - t0, 6)},
    }


def _text(report: dict[str, Any]) -> str:
    r = report["results"]
    lines = [f"lipsat {report['command']}: {report['input'].get('name', '')}".rstrip()]
    lines.append(f"generators: {report['input']['generators']}")
    if "smooth" in r:
        lines.append(f"smooth: {r['smooth']}")
        lines.extend(f"  {d}" for d in r.get("diagnostics", []))
    for key in ("b", "c", "bound_box", "box"):
        if key in r:
            lines.append(f"{key}: {r[key]}")
    if "verdict" in r:
        v = r["verdict"]
        lines.append(f"point {v['point']}: {'member' if v['member'] else 'not a member'}")
        if "witness" in v:
            w = v["witness"]
            lines.append(f"  subset {w['subset']}, support {w['support']}, character {w['character']}")
    for key in ("generators", "members", "diff"):
        if key in r:
            lines.append(f"{key} ({len(r[key])}): {r[key]}")
    if "iterations" in r:
        lines.append(f"iterations: {r['iterations']}")
    lines.append(f"time: {report['timing']['seconds']:.3f}s")
    return "\n".join(lines) + "\n"


def _emit(report: dict[str, Any], args) -> None:
    text = json.dumps(report, indent=2) + "\n" if args.format == "json" else _text(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _run(args, argv: Sequence[str]) -> int:
    t0 = time.perf_counter()
    G = load_semigroup(args.file)
    cmd = args.command
    if cmd == "info":
        report = check_smooth(G)
        results: dict[str, Any] = {
            "smooth": report.ok,
            "diagnostics": list(report.diagnostics),
        }
        if report.ok:
            b, c, B = bounds(G)
            results.update(b=list(b), c=list(c), bound_box=list(B.bound))
        _emit(_report(cmd, argv, G, results, t0), args)
        return EXIT_OK

    ctx = SaturationContext(G)
    if cmd == "check":
        q = parse_vector(args.point, G.dim)
        if any(x < 0 for x in q):
            raise InputError("point coordinates must be nonnegative")
        verdict = gamma_s_contains(G, q, ctx)
        data = verdict.to_json()
        if not verdict.member and not args.witness:
            data = {"point": list(q), "member": False, "kind": "none"}
        _emit(_report(cmd, argv, G, {"verdict": data}, t0), args)
        return EXIT_OK if verdict.member else EXIT_NO

    box = _box(G, args.box)
    if cmd == "plot":
        if G.dim != 2:
            raise InputError(f"plot needs dimension 2, got {G.dim}")
        svg = render_svg(G, box, args.jobs)
        if args.out:
            Path(args.out).write_text(svg, encoding="utf-8")
        else:
            sys.stdout.write(svg)
        return EXIT_OK
    if cmd == "saturate":
        res = lipschitz_generators(G, box, jobs=args.jobs)
        gens = res.sorted_generators()
        results = {
            "box": list(res.box.bound),
            "bound_box": list(res.bound_box.bound),
            "generators": _points(gens),
            "members": _points(res.members),
            "certificates": [gamma_s_contains(G, g, ctx).to_json() for g in gens],
        }
    elif cmd == "campillo":
        res = campillo_closure(G, box)
        results = {
            "box": list(box.bound),
            "members": _points(res.members),
            "iterations": res.iterations,
        }
    else:
        diff = sorted(diff_campillo(G, box, jobs=args.jobs))
        results = {
            "box": list(box.bound),
            "diff": _points(diff),
            "certificates": [gamma_s_contains(G, x, ctx).to_json() for x in diff],
        }
    _emit(_report(cmd, argv, G, results, t0), args)
    return EXIT_OK


def _verify(args) -> int:
    try:
        report = json.loads(Path(args.file).read_text(encoding="utf-8"))
        inp = report["input"]
        G = AffineSemigroup(inp["dim"], tuple(tuple(g) for g in inp["generators"]))
        results = report["results"]
        verdicts = [results["verdict"]] if "verdict" in results else []
        verdicts += results.get("certificates", [])
        parsed = [MembershipVerdict.from_json(v) for v in verdicts]
    except (OSError, ValueError, KeyError, TypeError, AttributeError) as exc:
        print(f"lipsat: cannot parse report: {exc}", file=sys.stderr)
        return EXIT_INPUT
    failures = []
    if inp.get("sha256") != digest(G):
        failures.append("input digest mismatch")
    for v in parsed:
        if v.kind == "none":
            if v.member:
                failures.append(f"{list(v.point)}: member claim without certificate")
            continue
        if not verify_certificate(G, v.point, v):
            failures.append(f"{list(v.point)}: certificate rejected")
    checked = sum(v.kind != "none" for v in parsed)
    if args.format == "json":
        print(json.dumps({"checked": checked, "failures": failures}, indent=2))
    else:
        for f in failures:
            print(f"FAIL {f}")
        print(f"{checked} certificate(s) checked, {len(failures)} failure(s)")
    return EXIT_NO if failures else EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    _setup_logging()
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command == "verify":
        return _verify(args)
    try:
        return _run(args, argv)
    except SmoothnessError as exc:
        print(f"lipsat: semigroup is not smooth: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, SemigroupError, ValueError) as exc:
        print(f"lipsat: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
