"""Deterministic SVG lattice diagrams for planar semigroups."""

from __future__ import annotations

import numpy as np

from .semigroup import AffineSemigroup, Box, box_member_mask
from .saturation import campillo_mask, member_mask

CELL = 28
MARGIN = 36

# (css class, fill, radius, legend label)
CLASSES = {
    "gamma": ("#1f1f1f", 5, "semigroup"),
    "campillo": ("#2b6cb0", 5, "Campillo closure minus semigroup"),
    "lipschitz": ("#c53030", 6, "saturation minus Campillo closure"),
    "outside": ("#b8b8b8", 2, "not in the saturation"),
}


def classify(G: AffineSemigroup, box: Box, jobs: int = 1) -> np.ndarray:
    """Class name for every box point, in C order."""
    gamma = box_member_mask(G, box)
    camp, _ = campillo_mask(G, box)
    sat = member_mask(G, box, jobs=jobs)
    labels = np.full(box.size, "outside", dtype=object)
    labels[sat] = "lipschitz"
    labels[camp] = "campillo"
    labels[gamma] = "gamma"
    return labels


def render_svg(G: AffineSemigroup, box: Box, jobs: int = 1) -> str:
    if G.dim != 2:
        raise ValueError("plots are only available in dimension 2")
    w, h = box.bound
    labels = classify(G, box, jobs)
    width = 2 * MARGIN + (w - 1) * CELL + 260
    height = 2 * MARGIN + (h - 1) * CELL + 20

    def sx(x: int) -> int:
        return MARGIN + x * CELL

    def sy(y: int) -> int:
        return MARGIN + (h - 1 - y) * CELL

    title = G.name or "semigroup"
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<title>{_escape(title)}: box {w}x{h}</title>",
        '<g stroke="#e2e2e2" stroke-width="1">',
    ]
    for x in range(w):
        out.append(f'<line x1="{sx(x)}" y1="{sy(0)}" x2="{sx(x)}" y2="{sy(h - 1)}"/>')
    for y in range(h):
        out.append(f'<line x1="{sx(0)}" y1="{sy(y)}" x2="{sx(w - 1)}" y2="{sy(y)}"/>')
    out.append("</g>")
    out.append('<g font-family="sans-serif" font-size="10" fill="#555">')
    for x in range(w):
        out.append(f'<text x="{sx(x)}" y="{sy(0) + 18}" text-anchor="middle">{x}</text>')
    for y in range(h):
        out.append(f'<text x="{sx(0) - 14}" y="{sy(y) + 4}" text-anchor="end">{y}</text>')
    out.append("</g>")
    for (x, y), label in zip(box.points().tolist(), labels):
        fill, r, _ = CLASSES[label]
        out.append(
            f'<circle class="{label}" data-x="{x}" data-y="{y}" cx="{sx(x)}" cy="{sy(y)}" '
            f'r="{r}" fill="{fill}"/>'
        )
    lx = sx(w - 1) + 40
    for k, (label, (fill, r, text)) in enumerate(CLASSES.items()):
        ly = MARGIN + 20 * k
        out.append(f'<circle cx="{lx}" cy="{ly}" r="{r}" fill="{fill}"/>')
        out.append(
            f'<text x="{lx + 12}" y="{ly + 4}" font-family="sans-serif" font-size="11">{text}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
