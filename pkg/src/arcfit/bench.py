"""Timing the fitter against denser copies of the same shape."""
from __future__ import annotations

import statistics
import time

import numpy as np
from scipy.interpolate import CubicSpline

from .estimator import ArcFitter
from .validation import check_polyline

DEFAULT_FACTORS = (1, 2, 4, 8)


def resample(points, factor: int, closed: bool = False) -> np.ndarray:
    """Dots spaced evenly in chord length along a cubic spline through ``points``.

    An open polyline of ``n`` dots becomes ``factor * (n - 1) + 1`` dots with
    the same end dots; a closed one becomes ``factor * n`` dots. Factor 1
    returns the input unchanged.
    """
    pts = np.asarray(points, dtype=float)
    if factor < 1:
        raise ValueError("factor must be at least 1")
    if factor == 1:
        return pts.copy()
    ring = np.vstack([pts, pts[:1]]) if closed else pts
    steps = np.hypot(*np.diff(ring, axis=0).T)
    s = np.concatenate([[0.0], np.cumsum(steps)])
    spline = CubicSpline(s, ring, bc_type="periodic" if closed else "not-a-knot")
    # spread the new dots evenly over the chord-length parameter
    m = factor * len(pts) if closed else factor * (len(pts) - 1) + 1
    targets = np.linspace(0.0, s[-1], m + 1 if closed else m)
    out = spline(targets)
    if closed:
        out = out[:-1]
    out[0] = pts[0]
    if not closed:
        out[-1] = pts[-1]
    return out


def time_fit(points, fitter: ArcFitter, repeats: int = 5):
    """Median wall time (ms) of ``repeats`` fits after one warm-up, and the
    fitted estimator."""
    est = fitter._fresh()
    est.fit(points)
    times = []
    for _ in range(max(1, repeats)):
        t = time.perf_counter()
        est.fit(points)
        times.append(1e3 * (time.perf_counter() - t))
    return statistics.median(times), est


def bench(points, fitter: ArcFitter, factors=DEFAULT_FACTORS, repeats: int = 5) -> dict:
    """Time and arc count per interpolation factor."""
    polyline, _ = check_polyline(points, fitter.closed, close_tol=0.5 * fitter.epsilon)
    mode = "closed" if polyline.closed else "open"
    template = type(fitter)(**{**fitter.get_params(), "closed": mode, "trace": False})
    rows = []
    for f in factors:
        dense = resample(polyline.points, int(f), polyline.closed)
        ms, est = time_fit(dense, template, repeats)
        rows.append({"factor": int(f), "dots": len(dense), "fittedDots": len(est.reduced_), "timeMs": ms,
                     "arcCount": est.stats_["arcCount"], "coverage": est.stats_["coverageFraction"]})
    base = rows[0]
    for r in rows:
        r["timeRatio"] = r["timeMs"] / base["timeMs"] if base["timeMs"] > 0 else float("nan")
    return {"repeats": repeats, "factors": rows}
