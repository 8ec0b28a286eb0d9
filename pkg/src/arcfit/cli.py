"""Command-line front end.

Exit codes: 0 success, 2 bad usage or settings, 3 unreadable input content,
4 file system errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bench import DEFAULT_FACTORS, bench
from .estimator import ArcFitter
from .exceptions import ParseError
from .io.gcode import EmitOptions, emit_gcode, parse_gcode, path_gcode
from .io.points import read_points
from .io.svg import render_svg_many
from .pipeline import fit_document, fit_points, merge_stats

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_IO = 4

GCODE_SUFFIXES = {".gcode", ".gco", ".g", ".nc"}

log = logging.getLogger("arcfit")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    input: str
    format: str | None = None
    output: str = "-"
    emit: str | None = None
    epsilon: float = 0.05
    min_dots: int = 4
    max_gap: float | None = 0.7
    closed: str = "auto"
    trace: bool = False
    bench: int | None = None
    factors: tuple = DEFAULT_FACTORS
    decimals: int | None = None
    stats_output: str | None = None

    def resolved_format(self) -> str:
        if self.format:
            return self.format
        suffix = Path(self.input).suffix.lower()
        if suffix in GCODE_SUFFIXES:
            return "gcode"
        return "json" if suffix == ".json" else "csv"

    def resolved_emit(self) -> str:
        if self.emit:
            return self.emit
        return "gcode" if self.resolved_format() == "gcode" else "stats"

    def fitter(self) -> ArcFitter:
        est = ArcFitter(
            epsilon=self.epsilon,
            min_dots=self.min_dots,
            max_gap=self.max_gap,
            closed=self.closed,
            trace=self.trace,
        )
        try:
            est._check_params()
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return est


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="arcfit",
        description="Replace dense polyline toolpaths by circular arcs and straight runs.",
    )
    p.add_argument("--input", required=True, help="input file, '-' for stdin")
    p.add_argument("--format", choices=("csv", "json", "gcode"), help="input format (default: from the file suffix)")
    p.add_argument("--output", default="-", help="output file, '-' for stdout (default)")
    p.add_argument("--emit", choices=("gcode", "svg", "stats"),
                   help="what to write (default: gcode for G-code input, stats otherwise)")
    p.add_argument("--epsilon", type=float, default=0.05, help="largest radial deviation in mm (default 0.05)")
    p.add_argument("--min-dots", type=int, default=4, help="fewest dots per arc (default 4)")
    p.add_argument("--max-gap", type=float, default=0.7, help="longest step inside an arc in mm (default 0.7)")
    p.add_argument("--closed", choices=("auto", "open", "closed"), default="auto")
    p.add_argument("--trace", action="store_true", help="log every solved intersection")
    p.add_argument("--bench", type=int, metavar="K", help="benchmark with K timed repetitions per factor")
    p.add_argument("--factors", default=",".join(map(str, DEFAULT_FACTORS)),
                   help="interpolation factors for --bench (default 1,2,4,8)")
    p.add_argument("--decimals", type=int, help="coordinate decimals in emitted G-code")
    p.add_argument("--stats-output", help="also write the statistics JSON to this file")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args) -> RunConfig:
    try:
        factors = tuple(int(f) for f in args.factors.split(",") if f.strip())
    except ValueError:
        raise UsageError(f"bad --factors {args.factors!r}") from None
    if not factors or min(factors) < 1:
        raise UsageError("--factors must be positive integers")
    if args.bench is not None and args.bench < 1:
        raise UsageError("--bench needs at least one repetition")
    if args.decimals is not None and not 0 <= args.decimals <= 9:
        raise UsageError("--decimals must be between 0 and 9")
    return RunConfig(
        input=args.input,
        format=args.format,
        output=args.output,
        emit=args.emit,
        epsilon=args.epsilon,
        min_dots=args.min_dots,
        max_gap=args.max_gap,
        closed=args.closed,
        trace=args.trace,
        bench=args.bench,
        factors=factors,
        decimals=args.decimals,
        stats_output=args.stats_output,
    )


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="ascii", errors="strict")


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=float) + "\n"


def run(config: RunConfig) -> dict:
    """Run the pipeline for ``config`` and write its output.

    Returns the statistics. Raises ParseError, UsageError or OSError.
    """
    fitter = config.fitter()
    fmt = config.resolved_format()
    emit = config.resolved_emit()
    try:
        text = _read(config.input)
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not ASCII text ({exc.reason})", 1) from None

    if fmt == "gcode":
        doc = parse_gcode(text)
        if config.bench is not None:
            if not doc.paths:
                raise ParseError("no extrusion runs to benchmark", 1)
            longest = max(doc.paths, key=lambda tp: len(tp.points))
            return _bench(longest.points, fitter, config)
        results = fit_document(doc, fitter)
        stats = merge_stats(results)
        if emit == "gcode":
            out = emit_gcode(doc, [r.path for r in results], EmitOptions(config.decimals), [r.index for r in results])
        elif emit == "svg":
            out = render_svg_many([(tp.points, r.path) for tp, r in zip(doc.paths, results)])
        else:
            out = None
    else:
        pts = read_points(text, fmt)
        if len(np.unique(pts, axis=0)) < 2:
            raise ParseError("need at least two distinct dots", max(len(pts), 1))
        if config.bench is not None:
            return _bench(pts, fitter, config)
        results = [fit_points(pts, fitter)]
        stats = merge_stats(results)
        r = results[0]
        if emit == "gcode":
            out = path_gcode(pts, r.path, r.index, 3 if config.decimals is None else config.decimals)
        elif emit == "svg":
            out = render_svg_many([(pts, r.path)])
        else:
            out = None

    if config.trace:
        stats["trace"] = [ev for r in results for ev in (r.trace or [])]
    stats_text = _dumps(stats)
    _write(config.output, stats_text if out is None else out)
    if config.stats_output:
        _write(config.stats_output, stats_text)
    if config.trace and out is not None and not config.stats_output:
        sys.stderr.write(_dumps(stats["trace"]))
    return stats


def _bench(points, fitter, config: RunConfig) -> dict:
    report = bench(points, fitter, config.factors, config.bench)
    _write(config.output, _dumps(report))
    return report


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="arcfit: %(message)s")
    try:
        config = config_from_args(args)
        run(config)
    except UsageError as exc:
        print(f"arcfit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"arcfit: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"arcfit: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # input that parses but cannot form a polyline in the asked mode
        print(f"arcfit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
