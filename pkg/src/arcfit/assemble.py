"""Turn resolved runs into a continuous path of arcs and straight runs.

Every arc is re-fitted so that it passes exactly through the original dots
at both of its ends. Neighbouring elements therefore share bit-identical
end points. Closed paths always start and end at dot 0.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateFit, PostFitBudgetExceeded
from .fitting import refit_fixed_endpoints
from .geometry import ArcSegment, Direction, Dot, IndexInterval, Polyline, radial_deviation, signed_sweep
from .scan import FitParams

POST_FIT_FACTOR = 1.25
SWEEP_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class LineRun:
    """Untouched consecutive dots.

    ``indices`` lists the polyline indices in travel order; a run that goes
    all the way round a closed polyline repeats its first index at the end.
    """

    dots: np.ndarray
    indices: np.ndarray
    source: IndexInterval

    @property
    def start_dot(self) -> Dot:
        return Dot(*map(float, self.dots[0]))

    @property
    def end_dot(self) -> Dot:
        return Dot(*map(float, self.dots[-1]))

    @property
    def length(self) -> float:
        return float(np.sum(np.hypot(*np.diff(self.dots, axis=0).T)))


@dataclass
class HybridPath:
    elements: list
    closed: bool = False
    warnings: list = field(default_factory=list)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def arcs(self):
        return [e for e in self.elements if isinstance(e, ArcSegment)]

    @property
    def lines(self):
        return [e for e in self.elements if isinstance(e, LineRun)]

    def sample(self, arc_points: int = 16) -> np.ndarray:
        """Dense (m, 2) array tracing the whole path."""
        chunks = []
        for k, el in enumerate(self.elements):
            pts = el.sample(arc_points) if isinstance(el, ArcSegment) else el.dots
            chunks.append(pts if k == 0 else pts[1:])
        return np.vstack(chunks) if chunks else np.empty((0, 2))


def element_indices(el) -> np.ndarray:
    """Polyline indices an element passes through, in travel order."""
    if isinstance(el, LineRun):
        return el.indices
    return _span_indices(el.source.start, len(el.source), el.source.modulus, el.source.closed)


def _span_indices(start, count, n, closed):
    idx = np.arange(start, start + count)
    return idx % n if closed else idx


def _knots(polyline: Polyline, intervals):
    n = len(polyline)
    knots = {0} if polyline.closed else {0, n - 1}
    for iv in intervals:
        if iv.is_full and polyline.closed:
            # whole loop on one circle: two half arcs meeting at dot 0
            knots.add(n // 2)
        else:
            knots.update((iv.start, iv.end))
    return sorted(knots)


def _owner(intervals, a: int, count: int):
    for iv in intervals:
        if iv.is_full and iv.closed:
            return iv
        off = iv.offset_of(a)
        if 0 <= off < len(iv) - 1 and off + count <= len(iv):
            return iv
    return None


def _make_line(polyline: Polyline, start: int, count: int) -> LineRun:
    n = len(polyline)
    idx = _span_indices(start, count, n, polyline.closed)
    source = IndexInterval(start % n, min(count, n), n, polyline.closed)
    return LineRun(polyline.points[idx], idx, source)


def _make_arc(polyline: Polyline, start: int, count: int, budget: float):
    """Arc pinned to the dots at both ends of the span, or a reason string."""
    n = len(polyline)
    idx = _span_indices(start, count, n, polyline.closed)
    pts = polyline.points[idx]
    if len(pts) < 3:
        return "span too short for an arc"
    first, last = Dot(*map(float, pts[0])), Dot(*map(float, pts[-1]))
    if first == last:
        return "span returns to its start"
    try:
        circle = refit_fixed_endpoints(pts[1:-1], first, last)
    except DegenerateFit as exc:
        return str(exc)
    dev = radial_deviation(circle, pts)
    if dev > budget:
        return f"pinned arc deviates {dev:.6g} > {budget:.6g}"
    travelled = signed_sweep(circle.center, pts)
    direction = Direction.CCW if travelled > 0 else Direction.CW
    a0 = math.atan2(first.y - circle.center.y, first.x - circle.center.x)
    a1 = math.atan2(last.y - circle.center.y, last.x - circle.center.x)
    sweep = (a1 - a0) % (2 * math.pi) if direction is Direction.CCW else (a0 - a1) % (2 * math.pi)
    if not 0 < sweep < 2 * math.pi or abs(abs(travelled) - sweep) > SWEEP_TOL:
        return "dots do not travel monotonically around the circle"
    source = IndexInterval(start % n, count, n, polyline.closed)
    return ArcSegment(circle, first, last, direction, source, dev, sweep)


def assemble(polyline: Polyline, solution, params: FitParams, post_factor: float = POST_FIT_FACTOR) -> HybridPath:
    """Build the hybrid path covering every dot of ``polyline``.

    Arcs that cannot be pinned to their end dots within
    ``post_factor * epsilon`` are demoted to straight runs and a
    PostFitBudgetExceeded warning is issued.
    """
    n = len(polyline)
    closed = polyline.closed
    intervals = [s.interval if hasattr(s, "interval") else s for s in solution]
    budget = post_factor * params.epsilon
    knots = _knots(polyline, intervals)
    spans = []
    if closed:
        for k, a in enumerate(knots):
            b = knots[(k + 1) % len(knots)]
            count = (b - a) % n + 1 if len(knots) > 1 else n + 1
            spans.append((a, count))
    else:
        spans = [(a, b - a + 1) for a, b in zip(knots, knots[1:])]

    path = HybridPath([], closed)
    for a, count in spans:
        owner = _owner(intervals, a, count) if count <= n else None
        if count < 3:
            # a sliver left by splitting a loop at dot 0 is just a chord
            owner = None
        el = None
        if owner is not None:
            el = _make_arc(polyline, a, count, budget)
            if isinstance(el, str):
                msg = f"run {owner} demoted to a straight run: {el}"
                warnings.warn(msg, PostFitBudgetExceeded, stacklevel=2)
                path.warnings.append(msg)
                el = None
        if el is None:
            prev = path.elements[-1] if path.elements else None
            if isinstance(prev, LineRun):
                path.elements[-1] = _make_line(polyline, int(prev.indices[0]), len(prev.indices) + count - 1)
                continue
            el = _make_line(polyline, a, count)
        path.elements.append(el)
    return path


def path_stats(path: HybridPath, polyline: Polyline) -> dict:
    n = len(polyline)
    arcs = path.arcs
    covered = np.zeros(n, dtype=bool)
    for arc in arcs:
        covered[element_indices(arc)] = True
    return {
        "arcCount": len(arcs),
        "dotsCovered": int(covered.sum()),
        "coverageFraction": float(covered.sum()) / n,
        "maxDeviation": max((a.max_deviation for a in arcs), default=0.0),
        "totalElements": len(path.elements),
    }


def arc_source_deviation(arc: ArcSegment, polyline: Polyline) -> float:
    """Radial deviation of an arc recomputed against its source dots."""
    return radial_deviation(arc.circle, polyline.take(arc.source))
