import math

import numpy as np
import pytest
from conftest import arc_points
from oracles import max_radial, pinned_sweep, taubin_svd

from arcfit.exceptions import CollinearInput, DegenerateFit
from arcfit.fitting import fit_interval, interval_error, refit_fixed_endpoints, taubin_fit
from arcfit.geometry import IndexInterval, Polyline, circle_from_three, radial_deviation


def test_taubin_exact_circle():
    pts = arc_points((2, 3), 5, 0, 2 * math.pi, 9)[:-1]
    c = taubin_fit(pts)
    assert c.center == pytest.approx((2, 3), abs=1e-9)
    assert c.radius == pytest.approx(5, rel=1e-9)
    assert radial_deviation(c, pts) <= 1e-9


def test_taubin_three_dots_matches_circumcircle():
    c = taubin_fit([(0, 0), (1, 1), (2, 0)])
    assert c.center == pytest.approx((1, 0), abs=1e-12)
    assert c.radius == pytest.approx(1, abs=1e-12)


def test_taubin_collinear():
    pts = np.c_[np.arange(50.0), np.zeros(50)]
    with pytest.raises(DegenerateFit):
        taubin_fit(pts)
    with pytest.raises(DegenerateFit):
        taubin_fit(pts[:2])


def test_taubin_matches_svd_oracle(rng):
    for _ in range(300):
        n = int(rng.integers(3, 60))
        kind = rng.integers(3)
        if kind == 0:
            pts = rng.normal(size=(n, 2)) * rng.uniform(0.1, 100)
        else:
            r = rng.uniform(0.5, 500)
            th = np.sort(rng.uniform(0, rng.uniform(0.1, 2 * math.pi), n))
            pts = np.c_[r * np.cos(th), r * np.sin(th)] + rng.normal(0, 0.01 * r, (n, 2))
        pts = pts + rng.uniform(-200, 200, 2)
        try:
            c = taubin_fit(pts)
        except DegenerateFit:
            continue
        cx, cy, r = taubin_svd(pts)
        scale = max(r, 1.0)
        assert abs(c.center.x - cx) <= 1e-6 * scale
        assert abs(c.center.y - cy) <= 1e-6 * scale
        assert abs(c.radius - r) <= 1e-6 * scale


def test_taubin_rigid_motion_equivariance(rng):
    pts = arc_points((0, 0), 7, 0.2, 2.0, 25) + rng.normal(0, 0.05, (25, 2))
    base = taubin_fit(pts)
    a = -1.1
    rot = np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])
    shift = np.array([-30.0, 80.0])
    moved = taubin_fit(pts @ rot.T + shift)
    want = rot @ np.array(base.center) + shift
    assert moved.center == pytest.approx(tuple(want), rel=1e-9, abs=1e-9)
    assert moved.radius == pytest.approx(base.radius, rel=1e-9)


def test_fit_interval_on_circle():
    poly = Polyline(arc_points((0, 0), 3, 0, 2, 10))
    res = fit_interval(poly, poly.full_interval())
    assert res.max_error <= 1e-9
    assert res.max_error == radial_deviation(res.circle, poly.points)


def test_fit_interval_one_displaced_dot():
    pts = arc_points((0, 0), 10, 0, 1.5, 20)
    pts[9] *= (10 + 0.05) / 10
    poly = Polyline(pts)
    res = fit_interval(poly, poly.full_interval())
    cx, cy, r = taubin_svd(pts)
    assert res.max_error == pytest.approx(max_radial(cx, cy, r, pts), abs=1e-9)
    assert 0.02 <= res.max_error <= 0.05


def test_fit_interval_three_dots_agree_with_circumcircle(rng):
    for _ in range(300):
        p = rng.uniform(-100, 100, (3, 2))
        try:
            want = circle_from_three(*p)
        except CollinearInput:
            continue
        if want.radius > 1e5:
            continue
        poly = Polyline(p)
        res = fit_interval(poly, poly.full_interval())
        assert res.max_error <= 1e-9 * max(1.0, want.radius)


def test_fit_interval_closed_wraps():
    pts = arc_points((0, 0), 4, 0, 2 * math.pi, 13)[:-1]
    poly = Polyline(pts, closed=True)
    res = fit_interval(poly, IndexInterval(10, 5, 12, True))
    assert res.circle.radius == pytest.approx(4)


def test_interval_error_degenerate_is_infinite():
    poly = Polyline(np.c_[np.arange(6.0), np.zeros(6)])
    assert interval_error(poly, poly.full_interval()) == math.inf


def test_fit_interval_needs_three():
    poly = Polyline([(0, 0), (1, 0), (1, 1)])
    with pytest.raises(ValueError):
        fit_interval(poly, IndexInterval(0, 2, 3))


def test_refit_through_three_points():
    c = refit_fixed_endpoints([(0, 1)], (-1, 0), (1, 0))
    assert c.center == pytest.approx((0, 0), abs=1e-9)
    assert c.radius == pytest.approx(1, abs=1e-9)


def test_refit_recovers_known_circle():
    pts = arc_points((3, -1), 8, 0.3, 2.2, 15)
    c = refit_fixed_endpoints(pts[1:-1], pts[0], pts[-1])
    assert c.center == pytest.approx((3, -1), abs=1e-6)
    assert c.radius == pytest.approx(8, abs=1e-6)


def test_refit_equalises_two_interior_dots():
    c = refit_fixed_endpoints([(0, 0.9), (0, 1.1)], (-1, 0), (1, 0))
    d = [abs(math.hypot(0 - c.center.x, y - c.center.y) - c.radius) for y in (0.9, 1.1)]
    assert d[0] == pytest.approx(d[1], abs=1e-9)
    t, worst = pinned_sweep((-1, 0), (1, 0), [(0, 0.9), (0, 1.1)])
    assert c.center.y == pytest.approx(t, abs=1e-3)
    assert max(d) <= worst + 1e-9


def test_refit_matches_dense_sweep(rng):
    for _ in range(40):
        r = rng.uniform(1, 20)
        pts = arc_points((0, 0), r, 0, rng.uniform(0.3, 3.0), int(rng.integers(4, 30)))
        pts = pts + rng.normal(0, 0.02, pts.shape)
        c = refit_fixed_endpoints(pts[1:-1], pts[0], pts[-1])
        _, worst = pinned_sweep(pts[0], pts[-1], pts[1:-1], span=3 * r, samples=200001)
        assert radial_deviation(c, pts[1:-1]) <= worst + 1e-9


def test_refit_passes_exactly_through_ends(rng):
    for _ in range(200):
        pts = rng.uniform(-50, 50, (int(rng.integers(3, 12)), 2))
        try:
            c = refit_fixed_endpoints(pts[1:-1], pts[0], pts[-1])
        except DegenerateFit:
            continue
        for p in (pts[0], pts[-1]):
            assert math.hypot(p[0] - c.center.x, p[1] - c.center.y) == pytest.approx(c.radius, rel=1e-12)


def test_refit_collinear_interior():
    with pytest.raises(DegenerateFit):
        refit_fixed_endpoints([(0.5, 0), (1, 0)], (0, 0), (2, 0))


def test_subset_monotone_on_arc_like_runs(rng):
    # sub-runs of a run that fits within eps stay within eps (eps/10 slack)
    checked = 0
    for _ in range(600):
        eps = float(rng.choice([0.005, 0.01, 0.05, 0.1]))
        r = rng.uniform(0.5, 200)
        n = int(rng.integers(5, 80))
        th = np.sort(rng.uniform(0, rng.uniform(0.05, 1.9 * math.pi), n))
        rad = r + rng.uniform(-eps / 2, eps / 2, n)
        poly_pts = np.c_[rad * np.cos(th), rad * np.sin(th)]
        try:
            poly = Polyline(poly_pts)
        except ValueError:
            continue
        if interval_error(poly, poly.full_interval()) > eps:
            continue
        for _ in range(5):
            a = int(rng.integers(0, n - 3))
            b = int(rng.integers(a + 3, n + 1))
            e = interval_error(poly, IndexInterval(a, b - a, n))
            if e == math.inf:
                continue
            checked += 1
            assert e <= 1.1 * eps
    assert checked > 500
