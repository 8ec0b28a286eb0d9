"""Planar primitives: dots, circles, arcs and index intervals.

Index intervals come in two flavours. In open mode an interval is a plain
range of polyline indices. In closed mode indices wrap modulo the dot count,
so an interval is stored as ``(start, length)`` and may cross the seam.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import CollinearInput, ModeMismatch

COLLINEAR_RTOL = 1e-12


class Dot(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Circle:
    center: Dot
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"radius must be positive and finite, got {self.radius}")
        if not (math.isfinite(self.center[0]) and math.isfinite(self.center[1])):
            raise ValueError("circle center must be finite")
        object.__setattr__(self, "center", Dot(float(self.center[0]), float(self.center[1])))


class Direction(str, Enum):
    CW = "cw"
    CCW = "ccw"


@dataclass(frozen=True)
class IndexInterval:
    """Contiguous run of ``length`` indices beginning at ``start``.

    ``modulus`` is the total dot count. With ``closed=True`` the run wraps
    past ``modulus - 1`` back to 0.
    """

    start: int
    length: int
    modulus: int
    closed: bool = False

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("interval length must be >= 1")
        if not 0 <= self.start < self.modulus:
            raise ValueError(f"start {self.start} outside [0, {self.modulus})")
        if self.closed:
            if self.length > self.modulus:
                raise ValueError("closed interval longer than its modulus")
        elif self.start + self.length > self.modulus:
            raise ValueError("open interval runs past the last index")

    @classmethod
    def from_bounds(cls, a: int, b: int, modulus: int, closed: bool = False) -> IndexInterval:
        """Interval from first index ``a`` to last index ``b`` inclusive."""
        if closed:
            return cls(a % modulus, (b - a) % modulus + 1, modulus, True)
        return cls(a, b - a + 1, modulus, False)

    @property
    def end(self) -> int:
        """Last index of the run."""
        return (self.start + self.length - 1) % self.modulus

    @property
    def is_full(self) -> bool:
        return self.length == self.modulus

    def __len__(self):
        return self.length

    def indices(self) -> np.ndarray:
        idx = np.arange(self.start, self.start + self.length)
        return idx % self.modulus if self.closed else idx

    def offset_of(self, index: int) -> int:
        """Position of ``index`` counted forward from ``start``.

        In closed mode the result is in ``[0, modulus)``; in open mode it may
        be negative or exceed the length.
        """
        off = index - self.start
        return off % self.modulus if self.closed else off

    def contains_index(self, index: int) -> bool:
        return 0 <= self.offset_of(index) < self.length

    def border(self) -> frozenset:
        return frozenset({self.start, self.end})

    def interior(self) -> frozenset:
        return frozenset(int(i) for i in self.indices()[1:-1])

    def in_interior(self, index: int) -> bool:
        return 0 < self.offset_of(index) < self.length - 1

    def shrink(self, from_start: int = 0, from_end: int = 0) -> IndexInterval:
        n = self.length - from_start - from_end
        if n < 1:
            raise ValueError("cannot shrink interval to nothing")
        start = self.start + from_start
        if self.closed:
            start %= self.modulus
        return IndexInterval(start, n, self.modulus, self.closed)

    def issubset(self, other: IndexInterval) -> bool:
        _check_mode(self, other)
        if other.is_full:
            return True
        off = other.offset_of(self.start)
        return 0 <= off and off + self.length <= other.length

    def _ranges(self):
        """Inclusive linear ranges covering this interval, split at the seam."""
        if not self.closed or self.start + self.length <= self.modulus:
            return [(self.start, self.start + self.length - 1)]
        return [(self.start, self.modulus - 1), (0, self.start + self.length - 1 - self.modulus)]

    def __repr__(self):
        tag = "closed" if self.closed else "open"
        return f"IndexInterval([{self.start}..{self.end}], len={self.length}, {tag} mod {self.modulus})"


@dataclass(frozen=True, eq=False)
class Polyline:
    """Ordered planar dots. A closed polyline wraps from the last dot back to
    the first; the first dot is never repeated at the end."""

    points: np.ndarray
    closed: bool = False

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"expected an (n, 2) array of dots, got shape {pts.shape}")
        if len(pts) < 2:
            raise ValueError("a polyline needs at least two dots")
        if not np.all(np.isfinite(pts)):
            raise ValueError("dot coordinates must be finite")
        step = np.hypot(*np.diff(pts, axis=0).T)
        if np.any(step == 0):
            raise ValueError("consecutive dots must be distinct")
        if self.closed and np.array_equal(pts[0], pts[-1]):
            raise ValueError("closed polyline must not repeat its first dot")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i) -> Dot:
        x, y = self.points[i % len(self.points) if self.closed else i]
        return Dot(float(x), float(y))

    def interval(self, start: int, length: int) -> IndexInterval:
        return IndexInterval(start, length, len(self.points), self.closed)

    def full_interval(self) -> IndexInterval:
        return self.interval(0, len(self.points))

    def take(self, interval: IndexInterval) -> np.ndarray:
        if interval.closed != self.closed or interval.modulus != len(self.points):
            raise ModeMismatch("interval does not index this polyline")
        if not self.closed:
            return self.points[interval.start : interval.start + interval.length]
        return self.points[interval.indices()]

    def gaps(self) -> np.ndarray:
        """Distance from each dot to the next (wrapping when closed)."""
        pts = self.points
        if self.closed:
            pts = np.vstack([pts, pts[:1]])
        return np.hypot(*np.diff(pts, axis=0).T)


@dataclass(frozen=True)
class IntervalRelation:
    intersection: list
    union_size: int
    first_in_second: bool
    second_in_first: bool

    @property
    def overlap_size(self) -> int:
        return sum(len(piece) for piece in self.intersection)


def _check_mode(a: IndexInterval, b: IndexInterval):
    if a.closed != b.closed:
        raise ModeMismatch("cannot combine open and closed intervals")
    if a.modulus != b.modulus:
        raise ModeMismatch(f"moduli differ ({a.modulus} vs {b.modulus})")


def intersect(a: IndexInterval, b: IndexInterval) -> list:
    """Connected pieces of ``a ∩ b``, ordered by start.

    Two closed intervals can overlap in two separate pieces when together
    they wrap the whole loop.
    """
    _check_mode(a, b)
    m = a.modulus
    pieces = []
    for lo1, hi1 in a._ranges():
        for lo2, hi2 in b._ranges():
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if lo <= hi:
                pieces.append([lo, hi])
    if not pieces:
        return []
    pieces.sort()
    merged = [pieces[0]]
    for lo, hi in pieces[1:]:
        if lo <= merged[-1][1] + 1:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    if a.closed and len(merged) > 1 and merged[0][0] == 0 and merged[-1][1] == m - 1:
        lo, _ = merged.pop()
        merged[0] = [lo, merged[0][1] + m]
    out = []
    for lo, hi in merged:
        n = hi - lo + 1
        if n >= m:
            # whole loop; anchor it on the first operand so the result is stable
            out.append(IndexInterval(a.start if a.is_full else b.start, m, m, True))
        else:
            out.append(IndexInterval(lo % m, n, m, a.closed))
    return sorted(out, key=lambda iv: iv.start)


def interval_ops(a: IndexInterval, b: IndexInterval) -> IntervalRelation:
    """Intersection pieces, union size and containment flags of two intervals."""
    pieces = intersect(a, b)
    common = sum(len(p) for p in pieces)
    return IntervalRelation(
        intersection=pieces,
        union_size=len(a) + len(b) - common,
        first_in_second=common == len(a),
        second_in_first=common == len(b),
    )


def as_array(dots) -> np.ndarray:
    arr = np.asarray(dots, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, 2)
    return arr


def radial_deviation(circle: Circle, dots: Sequence) -> float:
    """Largest ``| |dot - center| - radius |`` over ``dots``."""
    pts = as_array(dots)
    if len(pts) == 0:
        raise ValueError("radial_deviation needs at least one dot")
    dist = np.hypot(pts[:, 0] - circle.center.x, pts[:, 1] - circle.center.y)
    return float(np.max(np.abs(dist - circle.radius)))


def circle_from_three(p1, p2, p3) -> Circle:
    """Circumscribed circle of three dots.

    Raises CollinearInput when the triangle area is negligible relative to
    the squared spread of the dots.
    """
    (x1, y1), (x2, y2), (x3, y3) = p1, p2, p3
    ax, ay = x2 - x1, y2 - y1
    bx, by = x3 - x1, y3 - y1
    cross = ax * by - ay * bx
    scale = max(math.hypot(ax, ay), math.hypot(bx, by), math.hypot(x3 - x2, y3 - y2))
    if scale == 0 or abs(cross) <= COLLINEAR_RTOL * scale * scale:
        raise CollinearInput("three dots are collinear")
    a2 = ax * ax + ay * ay
    b2 = bx * bx + by * by
    ux = (by * a2 - ay * b2) / (2 * cross)
    uy = (ax * b2 - bx * a2) / (2 * cross)
    return Circle(Dot(x1 + ux, y1 + uy), math.hypot(ux, uy))


@dataclass(frozen=True)
class ArcSegment:
    circle: Circle
    start_dot: Dot
    end_dot: Dot
    direction: Direction
    source: IndexInterval
    max_deviation: float
    sweep: float

    @property
    def center(self) -> Dot:
        return self.circle.center

    @property
    def radius(self) -> float:
        return self.circle.radius

    @property
    def length(self) -> float:
        return self.radius * self.sweep

    def start_angle(self) -> float:
        return math.atan2(self.start_dot.y - self.center.y, self.start_dot.x - self.center.x)

    def point_at(self, fraction: float) -> Dot:
        """Point on the circle a given fraction of the sweep past the start."""
        sign = 1.0 if self.direction is Direction.CCW else -1.0
        ang = self.start_angle() + sign * self.sweep * fraction
        return Dot(self.center.x + self.radius * math.cos(ang), self.center.y + self.radius * math.sin(ang))

    def sample(self, n: int = 16) -> np.ndarray:
        pts = [self.point_at(t) for t in np.linspace(0.0, 1.0, n)]
        pts[0], pts[-1] = self.start_dot, self.end_dot
        return np.array(pts)


def signed_sweep(center, pts: np.ndarray) -> float:
    """Accumulated signed angle swept by ``pts`` around ``center`` (CCW > 0)."""
    v = pts - np.asarray(center, dtype=float)
    cross = v[:-1, 0] * v[1:, 1] - v[:-1, 1] * v[1:, 0]
    dot = v[:-1, 0] * v[1:, 0] + v[:-1, 1] * v[1:, 1]
    return float(np.sum(np.arctan2(cross, dot)))
