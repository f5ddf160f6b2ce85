"""Deterministic SVG figures of planar instances."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .complex import build_complex, complete_intersection, truncate_to_box
from .linalg import solve

SIZE = 600
PIECE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")
LABEL_COLORS = {2: "#444444", 3: "#000000"}


class UnsupportedDimension(ValueError):
    pass


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def polygon_vertices(P) -> list:
    """Vertices of a bounded planar polygon, counter-clockwise."""
    pts = set()
    for g, h in itertools.combinations(P.inequalities, 2):
        x = solve([list(g.b), list(h.b)], [-g.a, -h.a])
        if x is not None and P.contains(x):
            pts.add(tuple(x))
    cx = sum(float(p[0]) for p in pts) / len(pts)
    cy = sum(float(p[1]) for p in pts) / len(pts)
    return sorted(pts, key=lambda p: math.atan2(float(p[1]) - cy, float(p[0]) - cx))


def render_svg(functions, M, path=None, P=None, critical_points=()) -> str:
    """Bend loci clipped to ``[-M, M]^2``; vertices coloured by total label size."""
    if any(f.d != 2 for f in functions):
        raise UnsupportedDimension("figures are only drawn for planar instances")
    M = Fraction(M)
    scale = SIZE / (2 * float(M))

    def xy(p):
        return _fmt((float(p[0]) + float(M)) * scale), _fmt((float(M) - float(p[1])) * scale)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white" stroke="black"/>',
    ]
    if P is not None:
        pts = " ".join(",".join(xy(v)) for v in polygon_vertices(P))
        out.append(f'<polygon points="{pts}" fill="#f2e8c9" stroke="#8c6d1f" stroke-width="1.5"/>')
    for k, f in enumerate(functions):
        T = truncate_to_box(build_complex([f], min_size=2, n=1), M)
        color = PIECE_COLORS[k % len(PIECE_COLORS)]
        for c in T.cells_of_dim(1):
            a, b = sorted(T.facets_of(c.id))
            (x1, y1), (x2, y2) = xy(T.cells[a].point), xy(T.cells[b].point)
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" stroke-width="2"/>')
        for c in T.cells_of_dim(0):
            if c.label.cut:
                continue
            x, y = xy(c.point)
            fill = LABEL_COLORS.get(len(c.label.argmax[0]), "#000000")
            out.append(f'<circle cx="{x}" cy="{y}" r="4" fill="{fill}"/>')
    if len(functions) == 2:
        X = truncate_to_box(complete_intersection(functions), M)
        for c in X.cells_of_dim(0):
            if c.label.cut:
                continue
            x, y = xy(c.point)
            out.append(f'<circle cx="{x}" cy="{y}" r="7" fill="none" stroke="black" stroke-width="1.5"/>')
    for cp in critical_points:
        x, y = xy(cp.location)
        out.append(f'<path d="M {x} {y} m -5 -5 l 10 10 m -10 0 l 10 -10" stroke="#e377c2" stroke-width="2"/>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
