"""Resolution of overlapping candidates into a border-only solution set.

Candidates are visited from the largest down. Each one looks to its right
for the candidate that starts inside it and reaches furthest forward; the
two are made to meet at a single agreement dot, or the smaller one is
dropped when no agreement keeps both valid.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .exceptions import DegenerateFit, InternalInvariant
from .fitting import FitResult, fit_interval
from .geometry import IndexInterval, intersect
from .scan import Candidate, CandidateSet, FitParams, is_valid_run

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Intersection:
    big: int
    small: int
    overlap: IndexInterval


@dataclass(frozen=True)
class Solution:
    interval: IndexInterval
    fit: FitResult
    origin: int  # index of the candidate this run was cut from


@dataclass
class SolutionSet:
    items: list = field(default_factory=list)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def intervals(self):
        return [s.interval for s in self.items]


@dataclass(frozen=True)
class Agreement:
    agreement: int
    big: IndexInterval
    small: IndexInterval
    big_fit: FitResult
    small_fit: FitResult
    s_big: int
    s_small: int


class RemoveSmall:
    """Marker result: the overlap cannot be shared, drop the smaller run."""

    def __repr__(self):
        return "RemoveSmall"


REMOVE_SMALL = RemoveSmall()


def _size(candidate) -> int:
    iv = candidate.interval if hasattr(candidate, "interval") else candidate
    return len(iv)


def s_max(candidate, overlap: IndexInterval, params: FitParams) -> int:
    """Most dots a run may give up inside ``overlap`` and stay large enough."""
    size, g = _size(candidate), len(overlap)
    if size - g + 1 >= params.min_dots:
        return g - 1
    return max(size - params.min_dots, 0)


def _side(interval: IndexInterval, overlap: IndexInterval) -> str:
    if overlap.end == interval.end and overlap.start != interval.start:
        return "end"
    if overlap.start == interval.start and overlap.end != interval.end:
        return "start"
    return "both"


def _cut(interval: IndexInterval, side: str, n: int) -> IndexInterval:
    if n == 0:
        return interval
    return interval.shrink(from_end=n) if side == "end" else interval.shrink(from_start=n)


def length_difference(big_len: int, small_len: int, g: int, s_big: int) -> int:
    """Signed size difference of the two runs after the big one gives up
    ``s_big`` dots and the small one the rest of the overlap."""
    return (big_len - s_big) - (small_len - (g - 1 - s_big))


def is_relevant(a: IndexInterval, b: IndexInterval, piece: IndexInterval) -> bool:
    if len(piece) >= 2:
        return True
    i = piece.start
    return a.in_interior(i) or b.in_interior(i)


def solve_intersection(big: Candidate, small: Candidate, overlap: IndexInterval, params: FitParams, polyline):
    """Make two overlapping runs meet at one agreement dot.

    ``overlap`` must be a single connected piece of their intersection.
    The agreement is chosen among all feasible splits to minimise the size
    difference of the two resulting runs (ties go to the split where the
    bigger run gives up fewer dots); splits whose re-fitted runs exceed
    ``epsilon`` are skipped. Returns an ``Agreement`` or ``REMOVE_SMALL``.
    """
    g = len(overlap)
    big_side = _side(big.interval, overlap)
    small_side = _side(small.interval, overlap)
    if big_side == "both" or small_side == "both":
        return REMOVE_SMALL
    if big_side == small_side:
        raise InternalInvariant(f"overlap {overlap} is not between {big.interval} and {small.interval}")

    smax_b = s_max(big, overlap, params)
    smax_s = s_max(small, overlap, params)
    if g > smax_b + smax_s + 1:
        return REMOVE_SMALL

    nb, ns = len(big.interval), len(small.interval)
    lo, hi = max(0, g - 1 - smax_s), min(smax_b, g - 1)
    order = sorted(range(lo, hi + 1), key=lambda s: (abs(length_difference(nb, ns, g, s)), s))
    for s_b in order:
        s_s = g - 1 - s_b
        new_big = _cut(big.interval, big_side, s_b)
        new_small = _cut(small.interval, small_side, s_s)
        big_fit = big.fit if s_b == 0 else _refit(polyline, new_big, params)
        if big_fit is None:
            continue
        small_fit = small.fit if s_s == 0 else _refit(polyline, new_small, params)
        if small_fit is None:
            continue
        agreement = new_big.end if big_side == "end" else new_big.start
        return Agreement(agreement, new_big, new_small, big_fit, small_fit, s_b, s_s)
    return REMOVE_SMALL


def _refit(polyline, interval, params):
    if len(interval) < params.min_dots:
        return None
    try:
        fit = fit_interval(polyline, interval)
    except DegenerateFit:
        return None
    return fit if fit.max_error <= params.epsilon else None


def _order_pair(a: Solution, b: Solution, piece: IndexInterval):
    """Return (big, small); equal sizes keep the run lying before the overlap."""
    if len(a.interval) != len(b.interval):
        return (a, b) if len(a.interval) > len(b.interval) else (b, a)
    return (a, b) if _side(a.interval, piece) == "end" else (b, a)


class _Resolver:
    def __init__(self, candidates: CandidateSet, params: FitParams, polyline, trace):
        self.params = params
        self.polyline = polyline
        self.trace = trace
        self.alive = {k: Solution(c.interval, c.fit, k) for k, c in enumerate(candidates.items)}
        self.processed = set()

    def event(self, **kw):
        if self.trace is not None:
            self.trace.append(kw)

    def solve_pair(self, ka: int, kb: int, phase: str) -> bool:
        """Resolve every relevant overlap of two alive runs.

        Returns False when one of them was removed.
        """
        while ka in self.alive and kb in self.alive:
            a, b = self.alive[ka], self.alive[kb]
            pieces = [p for p in intersect(a.interval, b.interval) if is_relevant(a.interval, b.interval, p)]
            if not pieces:
                return True
            piece = min(pieces, key=lambda p: (-len(p), p.start))
            big, small = _order_pair(a, b, piece)
            kbig, ksmall = (ka, kb) if big is a else (kb, ka)
            res = solve_intersection(big, small, piece, self.params, self.polyline)
            base = dict(
                phase=phase,
                big=[big.interval.start, len(big.interval)],
                small=[small.interval.start, len(small.interval)],
                overlap=[piece.start, len(piece)],
                g=len(piece),
                smax_big=s_max(big, piece, self.params),
                smax_small=s_max(small, piece, self.params),
                big_side=_side(big.interval, piece),
            )
            if res is REMOVE_SMALL:
                self.event(outcome="remove_small", **base)
                del self.alive[ksmall]
                return False
            self.event(outcome="agreement", agreement=res.agreement, s_big=res.s_big, s_small=res.s_small, **base)
            self.alive[kbig] = Solution(res.big, res.big_fit, big.origin)
            self.alive[ksmall] = Solution(res.small, res.small_fit, small.origin)
        return False

    def run(self):
        n_dots = len(self.polyline)
        while True:
            pending = [k for k in self.alive if k not in self.processed]
            if not pending:
                break
            i = max(pending, key=lambda k: (len(self.alive[k].interval), -self.alive[k].interval.start))
            mi = self.alive[i].interval
            if len(mi) < self.params.min_dots:
                break
            j, reach = None, -1
            for k, sol in self.alive.items():
                if k == i or not mi.in_interior(sol.interval.start):
                    continue
                off = mi.offset_of(sol.interval.start)
                r = off + len(sol.interval)
                if r > reach:
                    j, reach = k, r
            if j is None:
                self.processed.add(i)
                continue
            union_len = max(len(mi), reach)
            both_kept = self.solve_pair(i, j, "scan")
            if not both_kept and i in self.alive:
                # partner dropped; look again from the same run
                continue
            if both_kept:
                self._drop_covered(i, j, mi, union_len, n_dots)
            self.processed.add(i)
        self._cleanup()
        items = sorted(self.alive.values(), key=lambda s: s.interval.start)
        return SolutionSet(items)

    def _drop_covered(self, i, j, base: IndexInterval, union_len: int, n_dots: int):
        everything = base.closed and union_len >= n_dots
        for k in list(self.alive):
            if k in (i, j):
                continue
            iv = self.alive[k].interval
            off = base.offset_of(iv.start)
            if everything or (off >= 0 and off + len(iv) <= union_len):
                self.event(outcome="covered", dropped=[iv.start, len(iv)])
                del self.alive[k]

    def _cleanup(self):
        # shrinking can move a start past a processed run; settle leftovers
        changed = True
        while changed:
            changed = False
            keys = sorted(self.alive, key=lambda k: self.alive[k].interval.start)
            intervals = [self.alive[k].interval for k in keys]
            for x, y in overlapping_pairs(intervals):
                ka, kb = keys[x], keys[y]
                if ka not in self.alive or kb not in self.alive:
                    continue
                a, b = self.alive[ka].interval, self.alive[kb].interval
                if any(is_relevant(a, b, p) for p in intersect(a, b)):
                    self.solve_pair(ka, kb, "cleanup")
                    changed = True
            if changed:
                log.debug("cleanup pass settled leftover overlaps")


def resolve_all(candidates: CandidateSet, params: FitParams, polyline, trace: list | None = None) -> SolutionSet:
    """Reduce the candidate set to runs that overlap only at their end dots.

    Pass a list as ``trace`` to collect one event per solved intersection.
    """
    solution = _Resolver(candidates, params, polyline, trace).run()
    check_solution(solution, params, polyline)
    return solution


def check_solution(solution: SolutionSet, params: FitParams, polyline):
    items = solution.items
    for s in items:
        if not is_valid_run(polyline, s.interval, params):
            raise InternalInvariant(f"resolved run {s.interval} is not valid")
    intervals = [s.interval for s in items]
    for x, y in overlapping_pairs(intervals):
        a, b = intervals[x], intervals[y]
        for p in intersect(a, b):
            if is_relevant(a, b, p):
                raise InternalInvariant(f"runs {a} and {b} still overlap")


def overlapping_pairs(intervals):
    """Index pairs ``(x, y)``, ``x < y``, of intervals sharing at least one
    index. ``intervals`` must be sorted by start."""
    for x, a in enumerate(intervals):
        for y in range(x + 1, len(intervals)):
            b = intervals[y]
            if not a.closed and b.start > a.end:
                break
            if a.offset_of(b.start) < len(a) or b.offset_of(a.start) < len(b):
                yield x, y
