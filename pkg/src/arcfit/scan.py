"""Candidate generation: the greedy maximal-extension scan.

For every start index the scan records how far forward a valid arc can be
grown (``delta[n]``: the run ``n .. n + delta[n]``). A run is valid when it
holds at least ``min_dots`` dots, no step between consecutive dots exceeds
``max_gap`` and the circle fitted to it stays within ``epsilon`` of every
dot. Each start reuses the previous extension minus one dot, so runs already
known to be contained in their predecessor are never re-checked.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fitting import FitResult, fit_interval, interval_error
from .geometry import IndexInterval, Polyline


@dataclass(frozen=True)
class FitParams:
    epsilon: float
    min_dots: int = 4
    max_gap: float = math.inf
    closed: bool = False

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.min_dots < 3:
            raise ValueError("min_dots must be at least 3")
        if not self.max_gap > 0:
            raise ValueError("max_gap must be positive")


@dataclass(frozen=True)
class Candidate:
    interval: IndexInterval
    fit: FitResult


@dataclass
class DeltaTable:
    delta: np.ndarray
    closed: bool = False

    def __len__(self):
        return len(self.delta)

    def intervals(self):
        m = len(self.delta)
        for n, d in enumerate(self.delta):
            if d > 0:
                yield IndexInterval(n, int(d) + 1, m, self.closed)


@dataclass
class CandidateSet:
    items: list = field(default_factory=list)
    params: FitParams | None = None

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def intervals(self):
        return [c.interval for c in self.items]


def _segment_distance(p, a, b):
    ab = b - a
    denom = ab @ ab
    if denom == 0:
        return math.hypot(*(p - a))
    t = min(max(((p - a) @ ab) / denom, 0.0), 1.0)
    q = a + t * ab
    return math.hypot(p[0] - q[0], p[1] - q[1])


def remove_collinear(polyline: Polyline, tol: float, return_index: bool = False, max_gap: float = math.inf):
    """Drop interior dots lying within ``tol`` of the segment joining their
    neighbours.

    Removal repeats until nothing changes, so the result is stable under a
    second call with the same ``tol``. Open polylines keep both end dots;
    closed ones keep dot 0, where the loop is entered. A dot whose removal
    would leave a step longer than ``max_gap`` is kept, so thinning never
    rules out an arc that the full polyline allows.

    With ``return_index=True`` also returns the original indices of the
    surviving dots.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    pts = polyline.points
    keep = list(range(len(pts)))
    floor = 3 if polyline.closed else 2
    changed = True
    while changed and len(keep) > floor:
        changed = False
        out = [keep[0]]
        m = len(keep)
        last = m if polyline.closed else m - 1
        for k in range(1, last):
            i = keep[k]
            nxt = keep[(k + 1) % m]
            prev = pts[out[-1]]
            if (
                len(out) + (m - k - 1) >= floor
                and _segment_distance(pts[i], prev, pts[nxt]) <= tol
                and math.hypot(pts[nxt][0] - prev[0], pts[nxt][1] - prev[1]) <= max_gap
            ):
                changed = True
                continue
            out.append(i)
        if not polyline.closed:
            out.append(keep[-1])
        keep = out
    reduced = Polyline(pts[keep], polyline.closed)
    if return_index:
        return reduced, np.asarray(keep, dtype=int)
    return reduced


def compute_deltas(polyline: Polyline, params: FitParams) -> DeltaTable:
    """Maximal forward extension of a valid arc from every start index.

    ``delta[n] == 0`` means no valid arc starts at ``n``.
    """
    n_dots = len(polyline)
    closed = polyline.closed
    gap_ok = polyline.gaps() <= params.max_gap
    r = params.min_dots
    eps = params.epsilon
    delta = np.zeros(n_dots, dtype=int)
    d = 0
    for s in range(n_dots):
        limit = n_dots - 1 if closed else n_dots - 1 - s
        d = min(max(d, 0), limit)
        failed = False
        while d < limit:
            d += 1
            if not gap_ok[(s + d - 1) % n_dots]:
                failed = True
                break
            if d + 1 >= r and interval_error(polyline, IndexInterval(s, d + 1, n_dots, closed)) > eps:
                failed = True
                break
        if failed:
            d -= 1
        if d + 1 < r:
            d = 0
        delta[s] = d
        d -= 1
    return DeltaTable(delta, closed)


def _uncontained(intervals, modulus, closed):
    if not intervals:
        return []
    if closed:
        full = [iv for iv in intervals if iv.is_full]
        if full:
            return [min(full, key=lambda iv: iv.start)]
        # unroll the loop twice so wrapped containment becomes linear
        entries = []
        for k, iv in enumerate(intervals):
            lo, hi = iv.start, iv.start + iv.length - 1
            entries.append((lo, -hi, k))
            entries.append((lo + modulus, -(hi + modulus), k))
    else:
        entries = [(iv.start, -(iv.start + iv.length - 1), k) for k, iv in enumerate(intervals)]
    entries.sort()
    contained = set()
    reach = -1
    for lo, neg_hi, k in entries:
        hi = -neg_hi
        if hi <= reach:
            contained.add(k)
        reach = max(reach, hi)
    return [iv for k, iv in enumerate(intervals) if k not in contained]


def build_candidates(deltas: DeltaTable, polyline: Polyline, params: FitParams) -> CandidateSet:
    """Turn the extension table into fitted candidates, dropping any run
    contained in another."""
    intervals = _uncontained(list(deltas.intervals()), len(polyline), polyline.closed)
    items = [Candidate(iv, fit_interval(polyline, iv)) for iv in sorted(intervals, key=lambda iv: iv.start)]
    return CandidateSet(items, params)


def is_valid_run(polyline: Polyline, interval: IndexInterval, params: FitParams) -> bool:
    """All three validity conditions: size, step length and fit error."""
    if len(interval) < params.min_dots:
        return False
    gaps = polyline.gaps()
    steps = (interval.indices()[:-1]) % len(polyline)
    if np.any(gaps[steps] > params.max_gap):
        return False
    return interval_error(polyline, interval) <= params.epsilon
