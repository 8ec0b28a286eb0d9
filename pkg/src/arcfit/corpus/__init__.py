"""Shipped test shapes.

The files in this directory are produced by ``generate`` and committed;
``python -m arcfit.corpus`` rewrites them. All coordinates are rounded to
3 decimals like slicer output, and consecutive dots stay closer than the
default 0.7 mm gap limit.
"""
from __future__ import annotations

import math
from importlib import resources
from pathlib import Path

import numpy as np

from ..io.points import format_points, read_points

POINT_FILES = {
    "circle": "circle.csv",
    "oval": "oval.csv",
    "gear": "gear.csv",
    "scurve": "scurve.csv",
    "blob": "blob.csv",
}
GCODE_FILES = {"layer": "layer.gcode"}


def path(name: str) -> Path:
    fname = POINT_FILES.get(name) or GCODE_FILES.get(name)
    if fname is None:
        raise KeyError(f"unknown corpus entry {name!r}")
    return Path(str(resources.files(__name__).joinpath(fname)))


def load_points(name: str) -> np.ndarray:
    return read_points(path(name).read_text(), "csv")


def load_text(name: str) -> str:
    return path(name).read_text()


def _closed(pts: np.ndarray) -> np.ndarray:
    # closed shapes repeat their first dot at the end
    return np.vstack([pts, pts[:1]])


def circle(radius: float = 10.0, n: int = 128) -> np.ndarray:
    th = 2 * math.pi * np.arange(n) / n
    return _closed(np.c_[radius * np.cos(th), radius * np.sin(th)])


def oval(a: float = 30.0, b: float = 15.0, n: int = 300) -> np.ndarray:
    th = 2 * math.pi * np.arange(n) / n
    return _closed(np.c_[a * np.cos(th), b * np.sin(th)])


def gear(teeth: int = 12, radius: float = 20.0, depth: float = 2.0, spacing: float = 0.4) -> np.ndarray:
    """Smoothed square-wave tooth profile around a circle, with dots evenly
    spaced along the outline."""
    th = np.linspace(0.0, 2 * math.pi, 20001)
    sharp = 4.0
    r = radius + depth * np.tanh(sharp * np.sin(teeth * th)) / math.tanh(sharp)
    fine = np.c_[r * np.cos(th), r * np.sin(th)]
    s = np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(fine, axis=0).T))])
    n = int(round(s[-1] / spacing))
    at = s[-1] * np.arange(n) / n
    pts = np.c_[np.interp(at, s, fine[:, 0]), np.interp(at, s, fine[:, 1])]
    return _closed(pts)


def scurve(n: int = 100, length: float = 40.0, amplitude: float = 8.0) -> np.ndarray:
    t = np.linspace(0.0, 1.0, n)
    return np.c_[length * t, amplitude * np.sin(2 * math.pi * t)]


def blob(n: int = 400) -> np.ndarray:
    th = 2 * math.pi * np.arange(n) / n
    r = 15 + 3 * np.sin(3 * th) + 1.5 * np.cos(5 * th + 1.0) + 0.8 * np.sin(7 * th + 2.0)
    return _closed(np.c_[r * np.cos(th), r * np.sin(th)])


def _layer_gcode() -> str:
    """Slicer-style G-code for two layers of a round part with a square
    infill: skirt, two perimeters, straight infill, retracting travels."""
    e_per_mm = 0.03326
    lines = [
        "; generated by arcfit.corpus, slicer-style test layer",
        "M140 S60",
        "M104 S210",
        "G21 ; millimetres",
        "G90",
        "M82 ; absolute extrusion",
        "G28",
        "G92 E0",
        "G1 Z0.3 F600",
    ]
    state = {"e": 0.0, "x": 0.0, "y": 0.0}

    def travel(x, y):
        state["e"] -= 0.8
        lines.append(f"G1 E{state['e']:.5f} F2400")
        lines.append(f"G0 X{x:.3f} Y{y:.3f} F6000")
        state["e"] += 0.8
        lines.append(f"G1 E{state['e']:.5f} F2400")
        state["x"], state["y"] = x, y

    def extrude(pts, feed):
        first = True
        for x, y in pts:
            step = math.hypot(x - state["x"], y - state["y"])
            state["e"] += round(step * e_per_mm, 5)
            tail = f" F{feed}" if first else ""
            lines.append(f"G1 X{x:.3f} Y{y:.3f} E{state['e']:.5f}{tail}")
            state["x"], state["y"] = x, y
            first = False

    def ring(radius, spacing, phase=0.0):
        n = max(8, int(round(2 * math.pi * radius / spacing)))
        th = phase + 2 * math.pi * np.arange(n + 1) / n
        pts = np.round(np.c_[50 + radius * np.cos(th), 50 + radius * np.sin(th)], 3)
        pts[-1] = pts[0]
        return pts

    for layer, z in enumerate((0.3, 0.5)):
        if layer:
            lines.append(f"G1 Z{z:.3f} F600")
        lines.append(f";LAYER:{layer}")
        if layer == 0:
            lines.append(";TYPE:SKIRT")
            skirt = ring(24.0, 0.55)
            travel(*skirt[0])
            extrude(skirt[1:], 1200)
        lines.append(";TYPE:WALL-OUTER")
        outer = ring(15.0, 0.45, phase=0.1 * layer)
        travel(*outer[0])
        extrude(outer[1:], 1500)
        lines.append(";TYPE:WALL-INNER")
        inner = ring(14.55, 0.45, phase=0.05)
        travel(*inner[0])
        extrude(inner[1:], 1800)
        lines.append(";TYPE:FILL")
        offsets = np.arange(-12.0, 12.01, 2.0)
        for k, c in enumerate(offsets):
            half = math.sqrt(14.1**2 - c**2)
            a, b = (50 - half, 50 + half) if k % 2 == 0 else (50 + half, 50 - half)
            if layer == 0:
                seg = [(a, 50 + c), (b, 50 + c)]
            else:
                seg = [(50 + c, a), (50 + c, b)]
            travel(*np.round(seg[0], 3))
            extrude(np.round([seg[1]], 3), 2400)
    lines += [
        f"G1 E{state['e'] - 0.8:.5f} F2400",
        "G0 Z10.000",
        "M104 S0",
        "M140 S0",
        "M84",
    ]
    return "\n".join(lines) + "\n"


def generate(directory: Path | None = None) -> list:
    """Write every corpus file; returns the paths written."""
    directory = Path(directory) if directory is not None else Path(__file__).parent
    shapes = {"circle": circle(), "oval": oval(), "gear": gear(), "scurve": scurve(), "blob": blob()}
    written = []
    for name, pts in shapes.items():
        target = directory / POINT_FILES[name]
        target.write_text(format_points(pts, "csv", 3))
        written.append(target)
    target = directory / GCODE_FILES["layer"]
    target.write_text(_layer_gcode())
    written.append(target)
    return written
