"""Compress dense polyline toolpaths into circular arcs and straight runs."""
from .assemble import HybridPath, LineRun, assemble, path_stats
from .estimator import ArcFitter
from .exceptions import (
    ArcFitError,
    CollinearInput,
    DegenerateFit,
    InternalInvariant,
    ModeMismatch,
    ParseError,
    PostFitBudgetExceeded,
    RelativeModeUnsupported,
)
from .fitting import FitResult, fit_interval, refit_fixed_endpoints, taubin_fit
from .geometry import (
    ArcSegment,
    Circle,
    Direction,
    Dot,
    IndexInterval,
    Polyline,
    circle_from_three,
    interval_ops,
    radial_deviation,
)
from .resolve import SolutionSet, resolve_all, s_max, solve_intersection
from .scan import CandidateSet, DeltaTable, FitParams, build_candidates, compute_deltas, remove_collinear

__version__ = "0.1.0"

__all__ = [
    "ArcFitError",
    "ArcFitter",
    "ArcSegment",
    "CandidateSet",
    "Circle",
    "CollinearInput",
    "DegenerateFit",
    "DeltaTable",
    "Direction",
    "Dot",
    "FitParams",
    "FitResult",
    "HybridPath",
    "IndexInterval",
    "InternalInvariant",
    "LineRun",
    "ModeMismatch",
    "ParseError",
    "Polyline",
    "PostFitBudgetExceeded",
    "RelativeModeUnsupported",
    "SolutionSet",
    "assemble",
    "build_candidates",
    "circle_from_three",
    "compute_deltas",
    "fit_interval",
    "interval_ops",
    "path_stats",
    "radial_deviation",
    "refit_fixed_endpoints",
    "remove_collinear",
    "resolve_all",
    "s_max",
    "solve_intersection",
    "taubin_fit",
]
