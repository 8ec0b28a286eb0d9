"""Circle fitting over runs of polyline dots.

The fit error of a run is the largest radial distance of its dots from the
fitted circle. Runs whose dots are (nearly) collinear raise DegenerateFit,
which callers treat as an infinite error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateFit
from .geometry import COLLINEAR_RTOL, Circle, Dot, IndexInterval, as_array

# radius beyond this multiple of the rms spread is treated as a straight run
MAX_RADIUS_RATIO = 1e6
REFIT_XTOL = 1e-10


@dataclass(frozen=True)
class FitResult:
    circle: Circle
    max_error: float


def _centered_moments(pts: np.ndarray):
    """Centroid, the rows ``(z, x, y)`` of the centred dots with
    ``z = x² + y²``, and their 3x3 moment sums as nested lists."""
    n = len(pts)
    centroid = pts.sum(axis=0) / n
    rows = np.empty((3, n))
    rows[1:] = (pts - centroid).T
    rows[0] = rows[1] * rows[1] + rows[2] * rows[2]
    return centroid, rows, (rows @ rows.T).tolist()


def _taubin_solve(m, n: int):
    """Circle ``(cx, cy, r)`` from the moment sums of centred dots."""
    mz = (m[1][1] + m[2][2]) / n
    if not mz > 0 or not math.isfinite(mz):
        raise DegenerateFit("dots coincide")
    # normalise so that the mean squared distance to the centroid is 1
    s2 = mz
    s = math.sqrt(s2)
    mzz = m[0][0] / (n * s2 * s2)
    mxz, myz = m[0][1] / (n * s2 * s), m[0][2] / (n * s2 * s)
    mxx, mxy, myy = m[1][1] / (n * s2), m[1][2] / (n * s2), m[2][2] / (n * s2)

    # spread across the principal axis: collinear runs have none
    half_gap = math.sqrt(0.25 * (mxx - myy) ** 2 + mxy * mxy)
    if 0.5 - half_gap <= COLLINEAR_RTOL**2 * 0.5:
        raise DegenerateFit("dots are collinear")

    # smallest root of the characteristic polynomial of the generalized
    # eigenproblem M a = eta N a, N = diag(4 mz, 1, 1); Newton from 0 never
    # overshoots it
    cov_xy = mxx * myy - mxy * mxy
    var_z = mzz - 1.0
    a3 = 4.0
    a2 = -3.0 - mzz
    a1 = var_z + 4.0 * cov_xy - mxz * mxz - myz * myz
    a0 = mxz * (mxz * myy - myz * mxy) + myz * (myz * mxx - mxz * mxy) - var_z * cov_xy
    x, y = 0.0, a0
    for _ in range(100):
        dy = a1 + x * (2.0 * a2 + 3.0 * a3 * x)
        if dy == 0.0:
            break
        x_new = x - y / dy
        if x_new == x or not math.isfinite(x_new):
            break
        y_new = a0 + x_new * (a1 + x_new * (a2 + x_new * a3))
        if abs(y_new) >= abs(y):
            break
        x, y = x_new, y_new
    det = x * x - x + cov_xy
    if det == 0.0:
        raise DegenerateFit("best conic is a line")
    cx = (mxz * (myy - x) - myz * mxy) / det / 2.0
    cy = (myz * (mxx - x) - mxz * mxy) / det / 2.0
    r = math.sqrt(cx * cx + cy * cy + 1.0)
    if not math.isfinite(r) or r > MAX_RADIUS_RATIO:
        raise DegenerateFit("fitted radius is unbounded")
    return cx * s, cy * s, r * s


def taubin_fit(dots) -> Circle:
    """Taubin algebraic circle fit.

    Minimises the algebraic distance of ``A(x²+y²) + Bx + Cy + D`` normalised
    by its mean squared gradient. After centring the dots this is a 3x3
    generalized eigenproblem on the second and third moments; its smallest
    eigenvalue is found as the first root of the characteristic cubic.

    Parameters
    ----------
    dots : array-like of shape (n, 2)
        At least three dots.

    Returns
    -------
    Circle

    Raises
    ------
    DegenerateFit
        If the dots are collinear or the best conic is a line.
    """
    pts = as_array(dots)
    if len(pts) < 3:
        raise DegenerateFit("need at least three dots")
    centroid, _, m = _centered_moments(pts)
    cx, cy, r = _taubin_solve(m, len(pts))
    return Circle(Dot(float(centroid[0]) + cx, float(centroid[1]) + cy), r)


def fit_dots(pts: np.ndarray) -> FitResult:
    if len(pts) < 3:
        raise DegenerateFit("need at least three dots")
    centroid, _, m = _centered_moments(pts)
    cx, cy, r = _taubin_solve(m, len(pts))
    circle = Circle(Dot(float(centroid[0]) + cx, float(centroid[1]) + cy), r)
    # same arithmetic as radial_deviation so the two agree bit for bit
    dist = np.hypot(pts[:, 0] - circle.center.x, pts[:, 1] - circle.center.y)
    return FitResult(circle, float(np.max(np.abs(dist - r))))


def fit_interval(polyline, interval: IndexInterval) -> FitResult:
    """Fit a circle over the dots of ``interval`` and report its max error."""
    if len(interval) < 3:
        raise ValueError("an interval needs at least three dots to be fitted")
    return fit_dots(polyline.take(interval))


def interval_error(polyline, interval: IndexInterval) -> float:
    """Fit error of ``interval``, infinite when the run is degenerate."""
    try:
        return fit_interval(polyline, interval).max_error
    except DegenerateFit:
        return math.inf


def _chord_frame(start, end, pts):
    a = np.asarray(start, dtype=float)
    b = np.asarray(end, dtype=float)
    chord = b - a
    h = 0.5 * math.hypot(chord[0], chord[1])
    if h == 0.0:
        raise ValueError("start and end dots coincide")
    e = chord / (2 * h)
    n = np.array([-e[1], e[0]])
    mid = 0.5 * (a + b)
    rel = pts - mid
    u = rel @ e
    v = rel @ n
    if np.sum(v) < 0:
        n, v = -n, -v
    return mid, n, h, u, v


def _deviations(t, u, v, h):
    # |p - c| - r with c = mid + t n, r = hypot(h, t), written to stay
    # accurate when t is huge (nearly straight arcs)
    dist = np.hypot(u, v - t)
    r = math.hypot(h, t)
    return (u * u + v * v - h * h - 2.0 * v * t) / (dist + r)


def _minimax_angle(u, v, h, lo, hi, samples=24):
    """Bisector angle minimising the worst deviation, by repeated zooming
    on a vectorised grid."""
    uu = u[None, :]
    vv = v[None, :]
    base = u * u + v * v - h * h
    best = lo
    while True:
        theta = np.linspace(lo, hi, samples)
        t = h * np.tan(theta)[:, None]
        dev = (base[None, :] - 2.0 * vv * t) / (np.hypot(uu, vv - t) + np.hypot(h, t))
        worst = np.max(np.abs(dev), axis=1)
        k = int(np.argmin(worst))
        best = float(theta[k])
        step = (hi - lo) / (samples - 1)
        # stop once a grid step moves the centre by less than the tolerance
        if step * h / max(math.cos(best) ** 2, 1e-300) <= REFIT_XTOL or step <= 1e-16:
            return best
        lo, hi = max(lo, best - step), min(hi, best + step)


def refit_fixed_endpoints(dots, start, end) -> Circle:
    """Circle through ``start`` and ``end`` that best fits the interior dots.

    The centre is constrained to the perpendicular bisector of the chord;
    its offset is chosen to minimise the largest radial deviation of
    ``dots``. The returned circle passes through both end dots.
    """
    pts = as_array(dots)
    if len(pts) == 0:
        raise ValueError("need at least one interior dot")
    mid, n, h, u, v = _chord_frame(start, end, pts)
    scale = max(h, float(np.max(np.hypot(u, v))))
    if np.max(np.abs(v)) <= COLLINEAR_RTOL * scale:
        raise DegenerateFit("interior dots lie on the chord")

    # each dot is passed through exactly by the circle with this centre offset;
    # the minimax offset lies between the extremes
    safe = np.where(np.abs(v) > COLLINEAR_RTOL * scale, v, np.nan)
    t_hit = (u * u + v * v - h * h) / (2.0 * safe)
    theta_hit = np.arctan(t_hit[np.isfinite(t_hit)] / h)
    lim = 0.5 * math.pi - 1e-12
    lo = float(max(np.min(theta_hit), -lim))
    hi = float(min(np.max(theta_hit), lim))

    if hi - lo <= 1e-15:
        best = lo
    else:
        best = _minimax_angle(u, v, h, lo, hi)

    t = h * math.tan(best)
    center = mid + t * n
    sx, sy = float(start[0]), float(start[1])
    return Circle(Dot(float(center[0]), float(center[1])), math.hypot(sx - center[0], sy - center[1]))
