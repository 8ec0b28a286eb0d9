"""SVG overlay of the source dots and the fitted path."""
from __future__ import annotations

import math
from xml.sax.saxutils import quoteattr

import numpy as np

from ..assemble import HybridPath, LineRun
from ..geometry import ArcSegment, Direction

ARC_COLORS = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
    "#9467bd", "#17becf", "#e377c2", "#8c564b",
)
LINE_COLOR = "#7f7f7f"
DOT_COLOR = "#202020"
MARGIN = 0.05


def _num(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _arc_d(arc: ArcSegment, flip) -> str:
    # y is flipped on screen, which mirrors the turning sense
    parts = []
    legs = 2 if arc.sweep > math.pi else 1
    r = _num(arc.radius)
    sweep_flag = 1 if arc.direction is Direction.CW else 0
    x0, y0 = flip(arc.start_dot)
    parts.append(f"M {_num(x0)} {_num(y0)}")
    for k in range(1, legs + 1):
        x, y = flip(arc.end_dot if k == legs else arc.point_at(k / legs))
        parts.append(f"A {r} {r} 0 0 {sweep_flag} {_num(x)} {_num(y)}")
    return " ".join(parts)


def render_svg(polyline, path: HybridPath | None = None, dot_radius: float | None = None) -> str:
    """SVG 1.1 drawing of ``polyline``'s dots with ``path`` on top.

    Each arc gets the next colour of a fixed cycle; straight runs are grey.
    With no path (or one without arcs) the dots are joined by a single
    polyline stroke.
    """
    return render_svg_many([(polyline, path)], dot_radius)


def render_svg_many(pairs, dot_radius: float | None = None) -> str:
    """Like ``render_svg`` for several ``(polyline, path)`` pairs in one
    drawing; the arc colour cycle runs on across pairs."""
    pairs = list(pairs)
    every = np.vstack([np.asarray(getattr(p, "points", p), dtype=float) for p, _ in pairs])
    lo, hi = every.min(axis=0), every.max(axis=0)
    size = np.maximum(hi - lo, 1e-9)
    pad = MARGIN * size.max()
    w, h = size[0] + 2 * pad, size[1] + 2 * pad
    # screen y grows downwards: draw at (x, -y)
    x0, y0 = lo[0] - pad, -(hi[1] + pad)

    def flip(p):
        return float(p[0]), -float(p[1])

    stroke = 0.004 * max(w, h)
    r = dot_radius if dot_radius is not None else 1.5 * stroke
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{_num(x0)} {_num(y0)} {_num(w)} {_num(h)}">',
        f'<g fill="none" stroke-width="{_num(stroke)}" stroke-linecap="round" stroke-linejoin="round">',
    ]
    k = 0
    for polyline, path in pairs:
        if path is None or not path.arcs:
            pts = np.asarray(getattr(polyline, "points", polyline), dtype=float)
            tag = "polygon" if getattr(polyline, "closed", False) else "polyline"
            joined = " ".join(f"{_num(x)},{_num(y)}" for x, y in map(flip, pts))
            out.append(f'<{tag} stroke="{LINE_COLOR}" points="{joined}"/>')
            continue
        for el in path.elements:
            if isinstance(el, LineRun):
                joined = " ".join(f"{_num(x)},{_num(y)}" for x, y in map(flip, el.dots))
                out.append(f'<polyline class="line" stroke="{LINE_COLOR}" points="{joined}"/>')
            else:
                color = ARC_COLORS[k % len(ARC_COLORS)]
                k += 1
                out.append(f'<path class="arc" stroke="{color}" d={quoteattr(_arc_d(el, flip))}/>')
    out.append("</g>")
    out.append(f'<g fill="{DOT_COLOR}">')
    for p in every:
        x, y = flip(p)
        out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="{_num(r)}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
