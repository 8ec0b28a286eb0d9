"""G-code reading and writing.

Only extruding linear moves in the XY plane are candidates for arc fitting.
A run of them at constant Z and feed becomes one ``ToolPath``; every other
line is kept verbatim and written back unchanged.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..assemble import HybridPath, LineRun, element_indices
from ..exceptions import ParseError, RelativeModeUnsupported
from ..geometry import ArcSegment, Direction, Dot

WORD = re.compile(r"([A-Za-z])\s*([-+]?(?:\d+\.?\d*|\.\d+))")
MOVE_LETTERS = {
    0: set("GXYZEF"),
    1: set("GXYZEF"),
    2: set("GXYZEFIJKRP"),
    3: set("GXYZEFIJKRP"),
}
RADIUS_MATCH = 1e-4
MAX_DECIMALS = 9


class MoveKind(str, Enum):
    RAPID = "rapid"
    LINEAR = "linear"
    ARC_CW = "arcCW"
    ARC_CCW = "arcCCW"


@dataclass(frozen=True)
class GcodeMove:
    kind: MoveKind
    target: Dot
    center_offset: Dot | None = None
    feed: float | None = None
    extrusion: float | None = None

    def __post_init__(self):
        if self.kind in (MoveKind.ARC_CW, MoveKind.ARC_CCW) and self.center_offset is None:
            raise ValueError("arc moves need a centre offset")


@dataclass
class ToolPath:
    """One extrusion run.

    ``points[0]`` is where the nozzle stood before the first move of the run.
    ``extrusion[k]`` is the E value at ``points[k]``: the register value in
    absolute E mode, the running sum from the start of the run in relative
    mode. Paths built from plain point lists carry no extrusion.
    """

    points: np.ndarray
    extrusion: np.ndarray | None
    feed: float | None
    z: float = 0.0
    layer: int = 0
    relative_e: bool = False
    emit_feed: bool = False
    line: int = 0

    @property
    def total_extrusion(self) -> float:
        if self.extrusion is None:
            return 0.0
        return float(self.extrusion[-1] - self.extrusion[0])

    def closes(self) -> bool:
        return len(self.points) >= 4 and bool(np.array_equal(self.points[0], self.points[-1]))


@dataclass
class LayerDocument:
    """Parsed G-code: verbatim lines interleaved with extrusion runs.

    ``items`` holds ``str`` lines and ``int`` indices into ``paths``.
    """

    items: list = field(default_factory=list)
    paths: list = field(default_factory=list)
    decimals: int = 3
    e_decimals: int = 5

    @property
    def preamble(self) -> str:
        return "".join(_verbatim_until_path(self.items))

    @property
    def postamble(self) -> str:
        return "".join(_verbatim_until_path(reversed(self.items))[::-1])

    def layers(self) -> dict:
        out = {}
        for k, p in enumerate(self.paths):
            out.setdefault(p.layer, []).append(k)
        return out


def _verbatim_until_path(items):
    out = []
    for it in items:
        if not isinstance(it, str):
            break
        out.append(it)
    return out


def _strip_comment(line: str) -> str:
    line = re.sub(r"\([^)]*\)", "", line)
    return line.split(";", 1)[0].strip()


def _words(code: str, lineno: int):
    words = []
    pos = 0
    for m in WORD.finditer(code):
        if code[pos:m.start()].strip():
            raise ParseError(f"malformed word {code[pos:m.start()].strip()!r}", lineno)
        words.append((m.group(1).upper(), float(m.group(2)), m.group(2)))
        pos = m.end()
    if code[pos:].strip():
        raise ParseError(f"malformed word {code[pos:].strip()!r}", lineno)
    return words


def _decimals(token: str) -> int:
    return len(token.split(".", 1)[1]) if "." in token else 0


class _Parser:
    def __init__(self):
        self.doc = LayerDocument()
        self.x = self.y = self.z = 0.0
        self.e = 0.0
        self.feed = None
        self.relative_xyz = False
        self.relative_e = False
        self.layer = -1
        self.layer_z = None
        self.run = None  # [points, extrusion, feed, z, relative_e, emit_feed, line]

    def close_run(self):
        if self.run is None:
            return
        pts, ext, feed, z, rel, emit_feed, line = self.run
        self.run = None
        # a layer is a stretch of runs printed at one height
        if z != self.layer_z:
            self.layer += 1
            self.layer_z = z
        path = ToolPath(np.array(pts, dtype=float), np.array(ext, dtype=float), feed, z, self.layer, rel, emit_feed, line)
        self.doc.items.append(len(self.doc.paths))
        self.doc.paths.append(path)

    def verbatim(self, raw: str):
        self.close_run()
        self.doc.items.append(raw)

    def feed_line(self, raw: str, lineno: int):
        code = _strip_comment(raw)
        if not code:
            if self.run is None:
                self.doc.items.append(raw)
            else:
                self.verbatim(raw)
            return
        head = code.split(None, 1)[0].upper()
        m = re.fullmatch(r"([GM])0*(\d+)(?:\.\d+)?", head)
        if m is None:
            self.verbatim(raw)
            return
        letter, num = m.group(1), int(m.group(2))
        if letter == "G" and num in MOVE_LETTERS:
            self.move(raw, code, num, lineno)
            return
        if letter == "G" and num == 92:
            words = _words(code, lineno)
            for key, val, _ in words[1:]:
                if key in "XYZE":
                    setattr(self, key.lower(), val)
        elif letter == "G" and num == 90:
            self.relative_xyz = self.relative_e = False
        elif letter == "G" and num == 91:
            self.relative_xyz = self.relative_e = True
        elif letter == "G" and num == 28:
            axes = {k for k, _, _ in _words(code, lineno)[1:]} & set("XYZ") or set("XYZ")
            for a in axes:
                setattr(self, a.lower(), 0.0)
        elif letter == "M" and num == 82:
            self.relative_e = False
        elif letter == "M" and num == 83:
            self.relative_e = True
        self.verbatim(raw)

    def move(self, raw, code, num, lineno):
        words = _words(code, lineno)
        allowed = MOVE_LETTERS[num]
        vals = {}
        for key, val, token in words[1:]:
            if key not in allowed:
                raise ParseError(f"unsupported word {key} in G{num} move", lineno)
            if key in vals:
                raise ParseError(f"word {key} given twice", lineno)
            vals[key] = val
            if key in "XY":
                self.doc.decimals = max(self.doc.decimals, min(_decimals(token), MAX_DECIMALS))
            elif key == "E":
                self.doc.e_decimals = max(self.doc.e_decimals, min(_decimals(token), MAX_DECIMALS))
        if self.relative_xyz and ("X" in vals or "Y" in vals):
            raise RelativeModeUnsupported("relative XY moves (G91) are not supported", lineno)

        nx = self.x + vals["X"] if self.relative_xyz and "X" in vals else vals.get("X", self.x)
        ny = self.y + vals["Y"] if self.relative_xyz and "Y" in vals else vals.get("Y", self.y)
        nz = self.z + vals["Z"] if self.relative_xyz and "Z" in vals else vals.get("Z", self.z)
        de = 0.0
        if "E" in vals:
            de = vals["E"] if self.relative_e else vals["E"] - self.e
        new_feed = vals.get("F", self.feed)

        extruding = num == 1 and de > 0 and (nx, ny) != (self.x, self.y) and nz == self.z
        if extruding:
            same = self.run is not None and new_feed == self.run[2] and self.run[4] == self.relative_e
            if not same:
                self.close_run()
                e0 = 0.0 if self.relative_e else self.e
                self.run = [[(self.x, self.y)], [e0], new_feed, self.z, self.relative_e, "F" in vals, lineno]
            pts, ext = self.run[0], self.run[1]
            pts.append((nx, ny))
            ext.append(ext[-1] + de)
        else:
            self.verbatim(raw)
        self.x, self.y, self.z = nx, ny, nz
        if "E" in vals:
            self.e = self.e + vals["E"] if self.relative_e else vals["E"]
        self.feed = new_feed


def parse_gcode(text: str) -> LayerDocument:
    """Split G-code into verbatim lines and extrusion runs.

    Raises
    ------
    ParseError
        For a malformed or unsupported word in a move, with its line number.
    RelativeModeUnsupported
        For an XY move while G91 is active.
    """
    parser = _Parser()
    for lineno, raw in enumerate(text.splitlines(keepends=True), start=1):
        if not raw.endswith("\n"):
            raw += "\n"
        parser.feed_line(raw, lineno)
    parser.close_run()
    return parser.doc


def fmt(value: float, decimals: int) -> str:
    s = f"{value:.{decimals}f}"
    if s.lstrip("-").strip("0.") == "":
        s = s.lstrip("-")
    return s


@dataclass(frozen=True)
class EmitOptions:
    decimals: int | None = None  # None: the precision found in the input
    e_decimals: int | None = None


def _round(v, d):
    return float(fmt(v, d))


def center_offset(start, target, center, decimals: int):
    """I,J written at ``decimals`` places such that the start and target
    radii agree within 1e-4 mm; more places are used when needed.

    Returns ``(i, j, decimals)``.
    """
    sx, sy = start
    tx, ty = target
    # the written end points are rounded; move the centre back onto their
    # perpendicular bisector before rounding it
    cx, cy = center
    mx, my = 0.5 * (sx + tx), 0.5 * (sy + ty)
    nx, ny = sy - ty, tx - sx
    norm = math.hypot(nx, ny)
    if norm > 0:
        k = ((cx - mx) * nx + (cy - my) * ny) / (norm * norm)
        cx, cy = mx + k * nx, my + k * ny
    best = None
    for d in range(decimals, MAX_DECIMALS + 1):
        step = 10.0 ** -d
        i0, j0 = _round(cx - sx, d), _round(cy - sy, d)
        ks = np.arange(-4, 5) * step
        ii, jj = np.meshgrid(i0 + ks, j0 + ks, indexing="ij")
        r1 = np.hypot(ii, jj)
        r2 = np.hypot(tx - sx - ii, ty - sy - jj)
        mismatch = np.abs(r1 - r2) + 1e-3 * np.hypot(ii - (cx - sx), jj - (cy - sy))
        k = np.unravel_index(np.argmin(mismatch), mismatch.shape)
        best = (float(ii[k]), float(jj[k]), d)
        if abs(r1[k] - r2[k]) < RADIUS_MATCH * 0.5:
            return best
    return best


def _row_map(indices: np.ndarray, index: np.ndarray, n_rows: int, closed: bool):
    rows = index[indices].copy()
    if closed and len(rows) > 1 and indices[-1] == 0:
        rows[-1] = n_rows - 1
    return rows


def _arc_moves(arc: ArcSegment, start_xy, end_xy, e0, e1, d):
    """G2/G3 lines for one arc, split in two when it sweeps past half a turn."""
    code = "G2" if arc.direction is Direction.CW else "G3"
    c = (arc.center.x, arc.center.y)
    if arc.sweep > math.pi + 1e-9:
        mid = arc.point_at(0.5)
        mid_xy = (_round(mid[0], d), _round(mid[1], d))
        e_mid = e0 + 0.5 * (e1 - e0)
        legs = [(start_xy, mid_xy, e0, e_mid), (mid_xy, end_xy, e_mid, e1)]
    else:
        legs = [(start_xy, end_xy, e0, e1)]
    return [(code, a, b, c, ea, eb) for a, b, ea, eb in legs]


def _emit_path(path: ToolPath, hybrid: HybridPath | None, index, d: int, de: int):
    pts = path.points
    n_rows = len(pts)
    ext = path.extrusion if path.extrusion is not None else np.zeros(n_rows)
    with_e = path.extrusion is not None
    feed = f" F{fmt(path.feed, 3).rstrip('0').rstrip('.')}" if path.emit_feed and path.feed is not None else ""
    out = []
    e_written = _round(ext[0], de) if path.relative_e else None

    def e_word(e_target):
        nonlocal e_written
        if not path.relative_e:
            return fmt(e_target, de)
        step = _round(e_target - e_written, de)
        e_written = e_written + step
        return fmt(step, de)

    def line(code, xy, e_target, ij=None):
        nonlocal feed
        s = f"{code} X{fmt(xy[0], d)} Y{fmt(xy[1], d)}"
        if ij is not None:
            s += f" I{fmt(ij[0], ij[2])} J{fmt(ij[1], ij[2])}"
        if with_e:
            s += f" E{e_word(e_target)}"
        s += f"{feed}\n"
        feed = ""
        out.append(s)

    if hybrid is None:
        for k in range(1, n_rows):
            line("G1", pts[k], ext[k])
        return out

    pos = (_round(pts[0][0], d), _round(pts[0][1], d))
    for el in hybrid.elements:
        rows = _row_map(element_indices(el), index, n_rows, hybrid.closed)
        if isinstance(el, LineRun):
            for r in range(rows[0] + 1, rows[-1] + 1):
                line("G1", pts[r], ext[r])
            pos = (_round(pts[rows[-1]][0], d), _round(pts[rows[-1]][1], d))
            continue
        a, b = rows[0], rows[-1]
        end_xy = (_round(pts[b][0], d), _round(pts[b][1], d))
        for code, p0, p1, c, ea, eb in _arc_moves(el, pos, end_xy, ext[a], ext[b], d):
            line(code, p1, eb, center_offset(p0, p1, c, d))
        pos = end_xy
    return out


def emit_gcode(doc: LayerDocument, paths=None, options: EmitOptions | None = None, indices=None) -> str:
    """Write ``doc`` back out, replacing fitted runs by arc moves.

    Parameters
    ----------
    doc : LayerDocument
    paths : list of HybridPath or None
        One per ``doc.paths`` entry; ``None`` (or a ``None`` entry) writes the
        run unchanged.
    options : EmitOptions
    indices : list of ndarray
        For each hybrid path, the row of the run's points behind every dot
        the path was fitted on (the estimator's ``index_``).
    """
    options = options or EmitOptions()
    d = doc.decimals if options.decimals is None else options.decimals
    de = doc.e_decimals if options.e_decimals is None else options.e_decimals
    out = []
    for item in doc.items:
        if isinstance(item, str):
            out.append(item)
            continue
        hybrid = paths[item] if paths is not None else None
        index = indices[item] if hybrid is not None else None
        out.extend(_emit_path(doc.paths[item], hybrid, index, d, de))
    return "".join(out)


def path_gcode(points, hybrid: HybridPath | None = None, index=None, decimals: int = 3) -> str:
    """Bare G1/G2/G3 moves tracing a point list, starting with a G0 to its
    first dot."""
    pts = np.asarray(points, dtype=float)
    if hybrid is not None:
        if index is None:
            index = np.arange(len(pts))
        if hybrid.closed:
            # a closed path ends on its first dot, drop any repeated tail
            pts = np.vstack([pts[: int(index.max()) + 1], pts[:1]])
    path = ToolPath(pts, None, None)
    head = f"G0 X{fmt(pts[0][0], decimals)} Y{fmt(pts[0][1], decimals)}\n"
    return head + "".join(_emit_path(path, hybrid, index, decimals, 5))


def moves(text: str) -> list:
    """Every motion command of a G-code text as ``GcodeMove`` objects, with
    absolute targets and the extrusion of each move."""
    parser = _Parser()
    result = []
    kinds = {0: MoveKind.RAPID, 1: MoveKind.LINEAR, 2: MoveKind.ARC_CW, 3: MoveKind.ARC_CCW}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        code = _strip_comment(raw)
        head = code.split(None, 1)[0].upper() if code else ""
        m = re.fullmatch(r"G0*([0-3])", head)
        e_before = parser.e
        rel = parser.relative_e
        parser.feed_line(raw + "\n", lineno)
        if m is None:
            continue
        words = {k: v for k, v, _ in _words(code, lineno)[1:]}
        num = int(m.group(1))
        offset = Dot(words.get("I", 0.0), words.get("J", 0.0)) if num >= 2 else None
        e = None
        if "E" in words:
            e = words["E"] if rel else words["E"] - e_before
        result.append(GcodeMove(kinds[num], Dot(parser.x, parser.y), offset, words.get("F"), e))
    return result


def total_extrusion(text: str) -> float:
    """Net filament pushed by all moves of a G-code text."""
    return math.fsum(m.extrusion for m in moves(text) if m.extrusion is not None)
