import itertools
import math

import numpy as np
import pytest
from oracles import connected_pieces, members

from arcfit.exceptions import CollinearInput, ModeMismatch
from arcfit.geometry import Circle, Dot, IndexInterval, Polyline, circle_from_three, interval_ops, radial_deviation


def test_radial_deviation_on_circle():
    c = Circle(Dot(0, 0), 1)
    assert radial_deviation(c, [(1, 0), (0, 1), (-1, 0)]) == 0


def test_radial_deviation_arithmetic():
    assert radial_deviation(Circle(Dot(0, 0), 1), [(1, 0), (0, 1.1)]) == pytest.approx(0.1)


def test_radial_deviation_displaced_samples():
    th = np.linspace(0, 2 * math.pi, 100, endpoint=False)
    pts = np.c_[5 + 5.02 * np.cos(th), 5.02 * np.sin(th)]
    assert radial_deviation(Circle(Dot(5, 0), 5), pts) == pytest.approx(0.02, abs=1e-12)


def test_radial_deviation_rigid_motion(rng):
    pts = rng.uniform(-50, 50, (30, 2))
    c = Circle(Dot(3, -2), 17)
    base = radial_deviation(c, pts)
    a = 0.7
    rot = np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])
    shift = np.array([120.0, -45.0])
    moved_c = rot @ np.array(c.center) + shift
    moved = pts @ rot.T + shift
    assert radial_deviation(Circle(Dot(*moved_c), 17), moved) == pytest.approx(base, rel=1e-9)


def test_radial_deviation_needs_dots():
    with pytest.raises(ValueError):
        radial_deviation(Circle(Dot(0, 0), 1), np.empty((0, 2)))


@pytest.mark.parametrize(
    "pts, center, radius",
    [
        (((0, 0), (1, 1), (2, 0)), (1, 0), 1),
        (((1, 0), (0, 1), (-1, 0)), (0, 0), 1),
    ],
)
def test_circle_from_three(pts, center, radius):
    c = circle_from_three(*pts)
    assert c.center == pytest.approx(center, abs=1e-12)
    assert c.radius == pytest.approx(radius, abs=1e-12)


def test_circle_from_three_collinear():
    with pytest.raises(CollinearInput):
        circle_from_three((0, 0), (1, 0), (2, 0))


def test_circle_from_three_passes_through_inputs(rng):
    for _ in range(500):
        p = rng.uniform(-1e3, 1e3, (3, 2))
        try:
            c = circle_from_three(*p)
        except CollinearInput:
            continue
        assert radial_deviation(c, p) <= 1e-9 * max(1.0, c.radius)


def test_circle_rejects_bad_radius():
    with pytest.raises(ValueError):
        Circle(Dot(0, 0), 0)
    with pytest.raises(ValueError):
        Circle(Dot(0, 0), math.inf)


def test_interval_open_overlap():
    rel = interval_ops(IndexInterval.from_bounds(1, 10, 20), IndexInterval.from_bounds(6, 13, 20))
    assert [(p.start, len(p)) for p in rel.intersection] == [(6, 5)]
    assert rel.overlap_size == 5
    assert rel.union_size == 13


def test_interval_open_disjoint():
    rel = interval_ops(IndexInterval.from_bounds(1, 5, 20), IndexInterval.from_bounds(7, 9, 20))
    assert rel.intersection == []


def test_interval_closed_two_pieces():
    a = IndexInterval.from_bounds(10, 3, 12, closed=True)
    b = IndexInterval.from_bounds(2, 11, 12, closed=True)
    pieces = [(p.start, p.end) for p in interval_ops(a, b).intersection]
    assert pieces == [(2, 3), (10, 11)]


def test_interval_mode_mismatch():
    with pytest.raises(ModeMismatch):
        interval_ops(IndexInterval(0, 3, 10), IndexInterval(0, 3, 10, True))
    with pytest.raises(ModeMismatch):
        interval_ops(IndexInterval(0, 3, 10), IndexInterval(0, 3, 11))


def test_interval_border_and_interior():
    iv = IndexInterval(10, 4, 12, True)
    assert iv.border() == {10, 1}
    assert iv.interior() == {11, 0}
    assert IndexInterval(3, 1, 5).interior() == frozenset()


def _all_intervals(m, closed):
    if closed:
        return [IndexInterval(s, n, m, True) for s in range(m) for n in range(1, m + 1)]
    return [IndexInterval(s, n, m) for s in range(m) for n in range(1, m - s + 1)]


@pytest.mark.parametrize("closed", [False, True])
def test_interval_ops_exhaustive(closed):
    # every pair for small moduli, a sample of pairs up to 50
    rng = np.random.default_rng(3)
    for m in list(range(1, 9)) + [13, 24, 37, 50]:
        ivs = _all_intervals(m, closed)
        if m <= 8:
            pairs = itertools.product(ivs, ivs)
        else:
            pick = rng.integers(0, len(ivs), (3000, 2))
            pairs = ((ivs[i], ivs[j]) for i, j in pick)
        for a, b in pairs:
            sa, sb = members(a), members(b)
            rel = interval_ops(a, b)
            want = connected_pieces(sa & sb, m, closed)
            got = [(p.start, len(p)) for p in rel.intersection]
            if want and want[0][0] == "full":
                assert len(got) == 1 and got[0][1] == m
            else:
                assert got == want, (a, b)
            assert rel.union_size == len(sa | sb)
            assert rel.first_in_second == (sa <= sb)
            assert rel.second_in_first == (sb <= sa)
            assert a.issubset(b) == (sa <= sb)


def test_polyline_invariants():
    with pytest.raises(ValueError):
        Polyline([(0, 0)])
    with pytest.raises(ValueError):
        Polyline([(0, 0), (0, 0), (1, 0)])
    with pytest.raises(ValueError):
        Polyline([(0, 0), (1, 0), (1, 1), (0, 0)], closed=True)
    with pytest.raises(ValueError):
        Polyline([(0, 0), (math.nan, 0)])
    p = Polyline([(0, 0), (3, 4), (3, 0)], closed=True)
    assert p.gaps().tolist() == [5, 4, 3]
