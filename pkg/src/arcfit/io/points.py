"""Plain point lists: one ``x,y`` pair per CSV line or a JSON array of pairs."""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from ..exceptions import ParseError
from ..validation import check_polyline

FORMATS = ("csv", "json")


def _number(text, lineno):
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise ParseError(f"not a number: {text!r}", lineno) from None
    if not math.isfinite(value):
        raise ParseError(f"not a finite number: {text!r}", lineno)
    return value


def _read_csv(text: str) -> np.ndarray:
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        cells = [c.strip() for c in row]
        if not any(cells) or cells[0].startswith("#"):
            continue
        if len(cells) != 2:
            raise ParseError(f"expected 2 values, got {len(cells)}", lineno)
        rows.append((_number(cells[0], lineno), _number(cells[1], lineno)))
    return np.array(rows, dtype=float).reshape(-1, 2)


def _read_json(text: str) -> np.ndarray:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(data, list):
        raise ParseError("expected an array of [x, y] pairs", 1)
    rows = []
    for k, item in enumerate(data):
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise ParseError(f"entry {k} is not an [x, y] pair", 1)
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item):
            raise ParseError(f"entry {k} holds a non-numeric value", 1)
        rows.append((_number(item[0], 1), _number(item[1], 1)))
    return np.array(rows, dtype=float).reshape(-1, 2)


def read_points(text: str, format: str = "csv") -> np.ndarray:
    """Raw (n, 2) array of the dots in ``text``."""
    if format == "csv":
        return _read_csv(text)
    if format == "json":
        return _read_json(text)
    raise ValueError(f"format must be one of {FORMATS}, got {format!r}")


def parse_points(text: str, format: str = "csv", closed="auto", close_tol: float = 0.0):
    """Polyline from a CSV or JSON point list.

    In ``"auto"`` mode the polyline is closed when its last dot repeats the
    first within ``close_tol``; the repeated dot is dropped.
    """
    pts = read_points(text, format)
    if len(pts) < 2:
        raise ParseError("need at least two dots", max(len(pts), 1))
    try:
        polyline, _ = check_polyline(pts, closed, close_tol)
    except ValueError as exc:
        raise ParseError(str(exc), 1) from None
    return polyline


def format_points(points, format: str = "csv", decimals: int = 3) -> str:
    pts = np.round(np.asarray(points, dtype=float), decimals) + 0.0
    if format == "json":
        return json.dumps(pts.tolist()) + "\n"
    return "".join(f"{x:.{decimals}f},{y:.{decimals}f}\n" for x, y in pts)
