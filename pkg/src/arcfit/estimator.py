"""Estimator-style front end for the arc fitting pipeline."""
from __future__ import annotations

import time

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .assemble import POST_FIT_FACTOR, HybridPath, assemble, path_stats
from .geometry import Polyline
from .resolve import SolutionSet, resolve_all
from .scan import CandidateSet, DeltaTable, FitParams, build_candidates, compute_deltas, remove_collinear
from .validation import check_polyline

STAGES = ("validate", "remove_collinear", "compute_deltas", "build_candidates", "resolve", "assemble")


def passthrough_path(polyline: Polyline) -> HybridPath:
    """Path made of a single straight run over every dot."""
    from .assemble import _make_line

    n = len(polyline)
    return HybridPath([_make_line(polyline, 0, n + 1 if polyline.closed else n)], polyline.closed)


class ArcFitter(BaseEstimator):
    """Replace runs of a dense polyline by circular arcs.

    Parameters
    ----------
    epsilon : float, default=0.05
        Largest radial distance (mm) allowed between a dot and its arc.
        ``0`` disables arc fitting and returns the input as straight runs.
    min_dots : int, default=4
        Fewest dots an arc may cover.
    max_gap : float, default=0.7
        Longest step (mm) between consecutive dots inside one arc.
    closed : {"auto", "open", "closed"} or bool, default="auto"
        Whether the polyline loops back to its first dot. ``"auto"`` closes
        it when the last dot repeats the first within ``epsilon / 2``.
    collinear_tol : float or None, default=None
        Tolerance for dropping collinear dots before fitting. ``None`` uses
        ``epsilon / 10``.
    post_factor : float, default=1.25
        Arcs whose pinned refit deviates more than ``post_factor * epsilon``
        are demoted to straight runs.
    trace : bool, default=False
        Record every solved intersection in ``trace_``.

    Attributes
    ----------
    polyline_ : Polyline
        Validated input.
    reduced_ : Polyline
        Polyline actually fitted (collinear dots removed).
    index_ : ndarray
        Row of ``X`` for every dot of ``reduced_``.
    deltas_, candidates_, solution_ : intermediate results
    path_ : HybridPath
    stats_ : dict
    timings_ : dict
        Wall time per stage in milliseconds.
    trace_ : list of dict or None
    """

    def __init__(
        self,
        epsilon=0.05,
        min_dots=4,
        max_gap=0.7,
        closed="auto",
        collinear_tol=None,
        post_factor=POST_FIT_FACTOR,
        trace=False,
    ):
        self.epsilon = epsilon
        self.min_dots = min_dots
        self.max_gap = max_gap
        self.closed = closed
        self.collinear_tol = collinear_tol
        self.post_factor = post_factor
        self.trace = trace

    def _params(self, closed: bool) -> FitParams:
        max_gap = np.inf if self.max_gap is None else self.max_gap
        return FitParams(float(self.epsilon), int(self.min_dots), float(max_gap), closed)

    def _check_params(self):
        if not (self.epsilon >= 0 and np.isfinite(self.epsilon)):
            raise ValueError("epsilon must be a finite non-negative number")
        if int(self.min_dots) != self.min_dots or self.min_dots < 3:
            raise ValueError("min_dots must be an integer of at least 3")
        if self.max_gap is not None and not self.max_gap > 0:
            raise ValueError("max_gap must be positive")
        if not self.post_factor >= 1:
            raise ValueError("post_factor must be at least 1")

    def fit(self, X, y=None):
        self._check_params()
        clock = {}
        t0 = time.perf_counter()
        polyline, index = check_polyline(X, self.closed, close_tol=0.5 * self.epsilon)
        clock["validate"] = time.perf_counter() - t0
        self.polyline_ = polyline
        self.trace_ = [] if self.trace else None

        if self.epsilon == 0:
            self.reduced_, self.index_ = polyline, index
            self.deltas_ = DeltaTable(np.zeros(len(polyline), dtype=int), polyline.closed)
            self.candidates_ = CandidateSet([], None)
            self.solution_ = SolutionSet([])
            self.path_ = passthrough_path(polyline)
        else:
            params = self._params(polyline.closed)
            tol = self.epsilon / 10 if self.collinear_tol is None else self.collinear_tol
            t = time.perf_counter()
            reduced, kept = remove_collinear(polyline, tol, return_index=True, max_gap=params.max_gap)
            clock["remove_collinear"] = time.perf_counter() - t
            t = time.perf_counter()
            self.deltas_ = compute_deltas(reduced, params)
            clock["compute_deltas"] = time.perf_counter() - t
            t = time.perf_counter()
            self.candidates_ = build_candidates(self.deltas_, reduced, params)
            clock["build_candidates"] = time.perf_counter() - t
            t = time.perf_counter()
            self.solution_ = resolve_all(self.candidates_, params, reduced, self.trace_)
            clock["resolve"] = time.perf_counter() - t
            t = time.perf_counter()
            self.path_ = assemble(reduced, self.solution_, params, self.post_factor)
            clock["assemble"] = time.perf_counter() - t
            self.reduced_, self.index_ = reduced, index[kept]
        self.timings_ = {k: 1e3 * v for k, v in clock.items()}
        self.timings_["total"] = 1e3 * (time.perf_counter() - t0)
        self.stats_ = path_stats(self.path_, self.reduced_)
        return self

    def fit_transform(self, X, y=None) -> HybridPath:
        return self.fit(X).path_

    def transform(self, X) -> HybridPath:
        """Hybrid path for ``X`` using this estimator's parameters.

        Every polyline is fitted on its own, so this does not depend on a
        previous call to ``fit``.
        """
        return self._fresh().fit(X).path_

    def score(self, X, y=None) -> float:
        """Fraction of the dots of ``X`` covered by arcs."""
        return self._fresh().fit(X).stats_["coverageFraction"]

    def _fresh(self):
        return type(self)(**self.get_params())

    @property
    def arc_count_(self) -> int:
        check_is_fitted(self, "path_")
        return self.stats_["arcCount"]
