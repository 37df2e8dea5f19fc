"""Grid-based approximation of the minimum weight triangulation."""
from .driver import CostReport, RunConfig, RunResult, cost, run, trials
from .errors import (
    ClassificationError,
    CrossingInsertionError,
    DegenerateInputError,
    GridError,
    InputFormatError,
    MwtError,
    OracleScaleError,
    Phase1Error,
    PreconditionError,
)
from .geom import INF, PointSet, Turn
from .oracle import convex_polygon_dp, exact_mwt, greedy_triangulation

__all__ = [
    "ClassificationError", "CostReport", "CrossingInsertionError", "DegenerateInputError",
    "GridError", "INF", "InputFormatError", "MwtError", "OracleScaleError", "Phase1Error",
    "PointSet", "PreconditionError", "RunConfig", "RunResult", "Turn", "convex_polygon_dp",
    "cost", "exact_mwt", "greedy_triangulation", "run", "trials",
]
__version__ = "0.1.0"
