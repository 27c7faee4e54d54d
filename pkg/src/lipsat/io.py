"""Semigroup input files and the report document format."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

from .semigroup import AffineSemigroup, SemigroupError


class InputError(ValueError):
    """Malformed input file, point or box argument."""


def parse_semigroup(text: str, name: str | None = None) -> AffineSemigroup:
    """Parse ``{"dim", "generators", "name"?}`` JSON or one generator per line.

    Plain-text lines hold space- or comma-separated integers; ``#`` starts a
    comment.
    """
    stripped = text.strip()
    if not stripped:
        raise InputError("empty input")
    try:
        if stripped[0] == "{":
            try:
                data = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise InputError(f"invalid JSON: {exc}") from None
            if not isinstance(data, dict) or "generators" not in data:
                raise InputError("JSON input needs a 'generators' list")
            gens = data["generators"]
            if not isinstance(gens, list) or not all(
                isinstance(g, list) and all(type(x) is int for x in g) for g in gens
            ):
                raise InputError("generators must be lists of integers")
            dim = data.get("dim", len(gens[0]) if gens else None)
            if type(dim) is not int:
                raise InputError("'dim' must be an integer")
            return AffineSemigroup(dim, tuple(tuple(g) for g in gens), data.get("name", name))
        gens = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].replace(",", " ").strip()
            if not line:
                continue
            try:
                gens.append(tuple(int(x) for x in line.split()))
            except ValueError:
                raise InputError(f"line {lineno}: expected integers") from None
        if not gens:
            raise InputError("no generators found")
        return AffineSemigroup(len(gens[0]), tuple(gens), name)
    except SemigroupError as exc:
        raise InputError(str(exc)) from None
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc)) from None


def load_semigroup(path: str | Path) -> AffineSemigroup:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {p}: {exc}") from None
    return parse_semigroup(text, name=p.stem)


def parse_vector(text: str, dim: int, what: str = "point") -> tuple[int, ...]:
    try:
        v = tuple(int(x) for x in text.replace(" ", "").split(","))
    except ValueError:
        raise InputError(f"{what} must be comma-separated integers, got {text!r}") from None
    if len(v) != dim:
        raise InputError(f"{what} has {len(v)} entries, expected {dim}")
    return v


def semigroup_json(G: AffineSemigroup) -> dict[str, Any]:
    out: dict[str, Any] = {"dim": G.dim, "generators": [list(g) for g in G.generators]}
    if G.name:
        out["name"] = G.name
    return out


def digest(G: AffineSemigroup) -> str:
    blob = json.dumps({"dim": G.dim, "generators": [list(g) for g in G.generators]}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


_VECTOR = {"type": "array", "items": {"type": "integer"}}
_POINTS = {"type": "array", "items": _VECTOR}

VERDICT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["point", "member", "kind"],
    "properties": {
        "point": _VECTOR,
        "member": {"type": "boolean"},
        "kind": {"enum": ["zero", "semigroup", "transcript", "witness", "none"]},
        "coefficients": _VECTOR,
        "offending": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["subset", "support", "coefficients"],
                "properties": {
                    "subset": _VECTOR,
                    "support": {"anyOf": [_VECTOR, {"type": "null"}]},
                    "coefficients": {
                        "type": "object",
                        "additionalProperties": {"type": "integer"},
                    },
                },
            },
        },
        "witness": {
            "type": "object",
            "required": ["subset", "support", "character"],
            "properties": {
                "subset": _VECTOR,
                "support": _VECTOR,
                "character": {"type": "array", "items": {"type": "string"}},
            },
        },
    },
}

REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "lipsat report",
    "type": "object",
    "required": ["tool", "version", "command", "argv", "input", "results", "timing"],
    "properties": {
        "tool": {"const": "lipsat"},
        "version": {"type": "string"},
        "command": {"enum": ["check", "saturate", "campillo", "diff", "info", "plot"]},
        "argv": {"type": "array", "items": {"type": "string"}},
        "input": {
            "type": "object",
            "required": ["dim", "generators", "sha256"],
            "properties": {
                "dim": {"type": "integer", "minimum": 1},
                "generators": _POINTS,
                "name": {"type": "string"},
                "sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
            },
        },
        "results": {
            "type": "object",
            "properties": {
                "verdict": VERDICT_SCHEMA,
                "certificates": {"type": "array", "items": VERDICT_SCHEMA},
                "box": _VECTOR,
                "bound_box": _VECTOR,
                "members": _POINTS,
                "generators": _POINTS,
                "diff": _POINTS,
                "iterations": {"type": "integer"},
            },
        },
        "timing": {
            "type": "object",
            "required": ["seconds"],
            "properties": {"seconds": {"type": "number", "minimum": 0}},
        },
    },
}
