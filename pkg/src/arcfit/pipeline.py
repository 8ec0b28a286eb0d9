"""Running the fitter over whole documents."""
from __future__ import annotations

import logging
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .estimator import ArcFitter, passthrough_path
from .exceptions import ArcFitError, PostFitBudgetExceeded
from .validation import check_polyline

log = logging.getLogger(__name__)

THREADS_ENV = "ARCFIT_THREADS"


@dataclass
class PathResult:
    path: object  # HybridPath
    index: np.ndarray
    stats: dict
    timings: dict
    trace: list | None
    dots: int


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        log.warning("ignoring %s=%r, not an integer", THREADS_ENV, raw)
        return 1


def fit_points(points, fitter: ArcFitter) -> PathResult:
    """Fit one polyline, falling back to straight runs if fitting fails.

    Geometry never makes this raise: the result always covers every dot.
    """
    est = fitter._fresh()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PostFitBudgetExceeded)
        try:
            est.fit(points)
            return PathResult(est.path_, est.index_, est.stats_, est.timings_, est.trace_, len(est.reduced_))
        except (ArcFitError, FloatingPointError) as exc:
            log.warning("fitting failed, keeping straight runs: %s", exc)
    polyline, index = check_polyline(points, fitter.closed)
    path = passthrough_path(polyline)
    stats = {"arcCount": 0, "dotsCovered": 0, "coverageFraction": 0.0, "maxDeviation": 0.0, "totalElements": 1}
    return PathResult(path, index, stats, {}, [] if fitter.trace else None, len(polyline))


def fit_document(doc, fitter: ArcFitter, threads: int | None = None) -> list:
    """Fit every extrusion run of a parsed G-code document.

    A run closes on itself only when its last point repeats the first
    exactly; ``fitter.closed`` of ``"open"`` or ``"closed"`` overrides that.
    Runs are spread over ``threads`` workers (``ARCFIT_THREADS`` by default).
    """
    threads = thread_count() if threads is None else max(1, threads)

    def one(tp):
        mode = fitter.closed
        if mode == "auto":
            mode = "closed" if tp.closes() else "open"
        if mode == "closed" and len(np.unique(tp.points, axis=0)) < 3:
            mode = "open"
        return fit_points(tp.points, _with_closed(fitter, mode))

    if threads == 1 or len(doc.paths) < 2:
        return [one(tp) for tp in doc.paths]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, doc.paths))


def _with_closed(fitter: ArcFitter, mode: str) -> ArcFitter:
    params = fitter.get_params()
    params["closed"] = mode
    return type(fitter)(**params)


def merge_stats(results) -> dict:
    """Document-wide statistics: arcs summed, coverage weighted by dots."""
    dots = sum(r.dots for r in results)
    covered = sum(r.stats["dotsCovered"] for r in results)
    timings = {}
    for r in results:
        for k, v in r.timings.items():
            timings[k] = timings.get(k, 0.0) + v
    return {
        "arcCount": sum(r.stats["arcCount"] for r in results),
        "coverage": covered / dots if dots else 0.0,
        "maxDeviation": max((r.stats["maxDeviation"] for r in results), default=0.0),
        "paths": len(results),
        "dots": dots,
        "wallTimeMs": timings,
    }
