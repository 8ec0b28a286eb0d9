"""Input checks shared by the estimator, the parsers and the CLI."""
from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .geometry import Polyline

CLOSED_MODES = ("auto", "open", "closed")


def check_dots(X) -> np.ndarray:
    """Validate an (n, 2) array of finite coordinates."""
    arr = check_array(X, dtype=np.float64, ensure_2d=True, ensure_min_samples=2, ensure_all_finite=True)
    if arr.shape[1] != 2:
        raise ValueError(f"expected 2 columns (x, y), got {arr.shape[1]}")
    return arr


def dedupe_consecutive(points: np.ndarray, tol: float = 0.0):
    """Drop dots equal (within ``tol``) to their predecessor.

    Returns the surviving dots and their row indices in ``points``.
    """
    keep = [0]
    for i in range(1, len(points)):
        if np.hypot(*(points[i] - points[keep[-1]])) > tol:
            keep.append(i)
    keep = np.asarray(keep, dtype=int)
    return points[keep], keep


def check_polyline(X, closed="auto", close_tol: float = 0.0):
    """Build a Polyline from raw dots.

    ``closed`` is ``"auto"``, ``"open"``, ``"closed"`` or a bool. In auto
    mode the polyline is closed when its last dot repeats the first within
    ``close_tol``; a repeated last dot is dropped in closed mode.

    Returns the Polyline and, for each of its dots, the row of ``X`` it
    came from.
    """
    if isinstance(closed, bool):
        closed = "closed" if closed else "open"
    if closed not in CLOSED_MODES:
        raise ValueError(f"closed must be one of {CLOSED_MODES}, got {closed!r}")
    if isinstance(X, Polyline):
        if closed != "auto" and (closed == "closed") != X.closed:
            X = Polyline(X.points, closed == "closed")
        return X, np.arange(len(X))
    pts, index = dedupe_consecutive(check_dots(X))
    if len(pts) < 2:
        raise ValueError("a polyline needs at least two distinct dots")
    repeats = len(pts) >= 3 and np.hypot(*(pts[-1] - pts[0])) <= close_tol
    is_closed = closed == "closed" or (closed == "auto" and repeats and len(pts) >= 4)
    if is_closed and (repeats or np.array_equal(pts[-1], pts[0])):
        pts, index = pts[:-1], index[:-1]
    if is_closed and len(pts) < 3:
        raise ValueError("a closed polyline needs at least three distinct dots")
    return Polyline(pts, bool(is_closed)), index
