"""Readers and writers for point lists, G-code and SVG."""
from .gcode import (
    EmitOptions,
    GcodeMove,
    LayerDocument,
    MoveKind,
    ToolPath,
    emit_gcode,
    moves,
    parse_gcode,
    total_extrusion,
)
from .points import format_points, parse_points, read_points
from .svg import render_svg

__all__ = [
    "EmitOptions",
    "GcodeMove",
    "LayerDocument",
    "MoveKind",
    "ToolPath",
    "emit_gcode",
    "format_points",
    "moves",
    "parse_gcode",
    "parse_points",
    "read_points",
    "render_svg",
    "total_extrusion",
]
