import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from conftest import arc_points

from arcfit import ArcFitter
from arcfit.assemble import HybridPath, assemble
from arcfit.exceptions import ParseError, RelativeModeUnsupported
from arcfit.fitting import fit_interval
from arcfit.geometry import ArcSegment, Circle, Direction, Dot, IndexInterval, Polyline
from arcfit.io import gcode
from arcfit.io.gcode import EmitOptions, GcodeMove, MoveKind, emit_gcode, parse_gcode, path_gcode
from arcfit.io.points import format_points, parse_points, read_points
from arcfit.io.svg import ARC_COLORS, LINE_COLOR, render_svg
from arcfit.pipeline import fit_document
from arcfit.resolve import Solution
from arcfit.scan import FitParams


def test_parse_single_run():
    doc = parse_gcode("G1 X0 Y0\nG1 X10 Y0 E1\nG1 X10 Y10 E2")
    (path,) = doc.paths
    assert path.points.tolist() == [[0, 0], [10, 0], [10, 10]]
    assert path.extrusion.tolist() == [0, 1, 2]
    assert path.total_extrusion == 2


def test_parse_layers_by_z():
    text = "G1 Z0.2\nG1 X1 Y0 E1\nG1 X2 Y0 E2\nG1 Z0.4\nG1 X1 Y0 E3\nG1 X0 Y0 E4\n"
    doc = parse_gcode(text)
    assert [p.layer for p in doc.paths] == [0, 1]
    assert set(doc.layers()) == {0, 1}


def test_parse_unknown_word():
    with pytest.raises(ParseError) as info:
        parse_gcode("G1 X10 Q5")
    assert info.value.line == 1


def test_parse_malformed_and_repeated_words():
    with pytest.raises(ParseError) as info:
        parse_gcode("G21\nG1 X1 Y2 E\n")
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_gcode("G1 X1 X2")


def test_relative_xy_rejected():
    with pytest.raises(RelativeModeUnsupported) as info:
        parse_gcode("G91\nG1 X1 Y1 E1\n")
    assert info.value.line == 2


def test_travel_breaks_runs_and_text_is_kept():
    text = "; hello\nM104 S200\nG1 X1 Y0 E1\nG1 X2 Y0 E2\nG0 X5 Y5\nG1 X6 Y5 E3\nG1 X6 Y6 E4\nM84\n"
    doc = parse_gcode(text)
    assert len(doc.paths) == 2
    assert doc.preamble == "; hello\nM104 S200\n"
    assert doc.postamble == "M84\n"
    out = emit_gcode(doc)
    assert gcode.moves(out) == gcode.moves(text)
    assert out.startswith(doc.preamble) and out.endswith("M84\n")


def test_relative_extrusion_run():
    doc = parse_gcode("M83\nG1 X1 Y0 E0.5\nG1 X2 Y0 E0.25\n")
    (path,) = doc.paths
    assert path.relative_e
    assert path.extrusion.tolist() == [0, 0.5, 0.75]


def test_arc_move_text():
    arc = ArcSegment(Circle(Dot(5, 0), 5), Dot(0, 0), Dot(10, 0), Direction.CCW, IndexInterval(0, 3, 3), 0.0, math.pi)
    hybrid = HybridPath([arc])
    text = path_gcode([(0, 0), (5, -5), (10, 0)], hybrid)
    assert text.splitlines() == ["G0 X0.000 Y0.000", "G3 X10.000 Y0.000 I5.000 J0.000"]


def test_moves_reads_arcs():
    (m0, m1) = gcode.moves("G1 X1 Y1\nG2 X3 Y1 I1 J0 E0.5\n")
    assert m0 == GcodeMove(MoveKind.LINEAR, Dot(1, 1))
    assert m1.kind is MoveKind.ARC_CW and m1.center_offset == Dot(1, 0) and m1.extrusion == 0.5
    with pytest.raises(ValueError):
        GcodeMove(MoveKind.ARC_CCW, Dot(0, 0))


def test_center_offset_meets_radius_check():
    rng = np.random.default_rng(2)
    for _ in range(200):
        c = rng.uniform(-100, 100, 2)
        r = rng.uniform(0.5, 300)
        a, b = rng.uniform(0, 2 * math.pi, 2)
        s = np.round(c + r * np.array([math.cos(a), math.sin(a)]), 3)
        t = np.round(c + r * np.array([math.cos(b), math.sin(b)]), 3)
        i, j, d = gcode.center_offset(s, t, c, 3)
        assert abs(math.hypot(i, j) - math.hypot(t[0] - s[0] - i, t[1] - s[1] - j)) < 1e-4


def _radius_mismatch(text):
    worst = 0.0
    pos = (0.0, 0.0)
    for m in gcode.moves(text):
        if m.center_offset is not None:
            c = (pos[0] + m.center_offset.x, pos[1] + m.center_offset.y)
            r0 = math.hypot(pos[0] - c[0], pos[1] - c[1])
            r1 = math.hypot(m.target.x - c[0], m.target.y - c[1])
            worst = max(worst, abs(r0 - r1))
        pos = m.target
    return worst


def _fit_layer(text, eps):
    doc = parse_gcode(text)
    results = fit_document(doc, ArcFitter(epsilon=eps))
    out = emit_gcode(doc, [r.path for r in results], indices=[r.index for r in results])
    return doc, results, out


def test_layer_round_trip_without_arcs(layer_text):
    doc, results, out = _fit_layer(layer_text, 0.0)
    assert out == layer_text
    assert sum(len(r.path.arcs) for r in results) == 0


def test_layer_with_arcs_conserves_extrusion(layer_text):
    doc, results, out = _fit_layer(layer_text, 0.05)
    assert sum(len(r.path.arcs) for r in results) > 0
    before, after = gcode.total_extrusion(layer_text), gcode.total_extrusion(out)
    assert after == pytest.approx(before, rel=1e-9)
    assert _radius_mismatch(out) < 1e-4
    # untouched lines survive in order
    kept = [ln for ln in layer_text.splitlines() if not ln.startswith(("G1 X", "G2", "G3"))]
    assert [ln for ln in out.splitlines() if not ln.startswith(("G1 X", "G2", "G3"))] == kept


def test_relative_extrusion_is_conserved():
    th = np.linspace(0, 2, 40)
    pts = np.c_[10 * np.cos(th), 10 * np.sin(th)]
    lines = ["M83", f"G0 X{pts[0][0]:.3f} Y{pts[0][1]:.3f}"]
    lines += [f"G1 X{x:.3f} Y{y:.3f} E0.01733" for x, y in pts[1:]]
    text = "\n".join(lines) + "\n"
    doc = parse_gcode(text)
    results = fit_document(doc, ArcFitter(epsilon=0.01))
    assert len(results[0].path.arcs) >= 1
    out = emit_gcode(doc, [r.path for r in results], indices=[r.index for r in results])
    assert gcode.total_extrusion(out) == pytest.approx(gcode.total_extrusion(text), rel=1e-9)


def test_emit_precision_option():
    doc = parse_gcode("G1 X1 Y0 E1\nG1 X2 Y0.5 E2\n")
    assert emit_gcode(doc, options=EmitOptions(decimals=1)) == "G1 X1.0 Y0.0 E1.00000\nG1 X2.0 Y0.5 E2.00000\n"


def test_parse_points_csv():
    poly = parse_points("0,0\n1,0\n1,1")
    assert len(poly) == 3 and not poly.closed


def test_parse_points_auto_closes_square():
    poly = parse_points("0,0\n1,0\n1,1\n0,1\n0,0\n")
    assert len(poly) == 4 and poly.closed


def test_parse_points_json_and_comments():
    assert parse_points("[[0,0],[1,0],[1,1]]", "json").points.tolist() == [[0, 0], [1, 0], [1, 1]]
    assert read_points("# x,y\n0,0\n\n1,2\n").tolist() == [[0, 0], [1, 2]]


@pytest.mark.parametrize(
    "text, fmt, line",
    [("a,b", "csv", 1), ("0,0\n1,2,3\n", "csv", 2), ("0,0\n1,nan\n", "csv", 2), ('[[0,0],[1,"x"]]', "json", 1),
     ("[1,2]", "json", 1), ("[[0,0],\n[1,0]", "json", 2), ("0,0\n", "csv", 1)],
)
def test_parse_points_errors(text, fmt, line):
    with pytest.raises(ParseError) as info:
        parse_points(text, fmt)
    assert info.value.line == line


def test_format_points_round_trip():
    pts = np.array([[0.1234, -5.0], [2.0, 3.5]])
    assert read_points(format_points(pts, "csv")).tolist() == [[0.123, -5.0], [2.0, 3.5]]
    assert read_points(format_points(pts, "json"), "json").tolist() == [[0.123, -5.0], [2.0, 3.5]]


def _strokes(svg):
    root = ET.fromstring(svg)
    return [(el.tag.split("}")[1], el.get("stroke")) for el in root.iter() if el.get("stroke")]


def test_svg_without_path():
    pts = arc_points((0, 0), 5, 0, 2, 10)
    svg = render_svg(Polyline(pts))
    assert _strokes(svg) == [("polyline", LINE_COLOR)]
    root = ET.fromstring(svg)
    assert len([e for e in root.iter() if e.tag.endswith("circle")]) == 10
    x, y, w, h = map(float, root.get("viewBox").split())
    assert x < pts[:, 0].min() and w > np.ptp(pts[:, 0])


def test_svg_three_arcs_three_colours():
    pts = arc_points((0, 0), 5, 0, 3, 31)
    poly = Polyline(pts)
    params = FitParams(0.01)
    sols = []
    for a, b in ((0, 10), (10, 20), (20, 30)):
        iv = IndexInterval.from_bounds(a, b, 31)
        sols.append(Solution(iv, fit_interval(poly, iv), 0))
    path = assemble(poly, sols, params)
    assert len(path.arcs) == 3
    colours = [s for tag, s in _strokes(render_svg(poly, path)) if tag == "path"]
    assert len(colours) == 3 and len(set(colours)) == 3
    assert set(colours) <= set(ARC_COLORS)
