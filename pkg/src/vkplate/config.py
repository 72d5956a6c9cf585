"""Run configuration shared by both solver entry points."""

from __future__ import annotations

import math
from dataclasses import dataclass

#: Residual threshold above which a run is declared divergent.
DIVERGENCE_ERR = 1e8

#: Default residual grid: squares averaged over grid_size + 1 uniform points.
DEFAULT_GRID = 100

PRECISIONS = ("double", "extended")


@dataclass(frozen=True)
class SeriesMode:
    """Plain homotopy series summed to a fixed order, no truncation.

    ``tol`` only classifies the final status (converged vs not); the
    series always runs to the requested order.
    """

    order: int = 100
    tol: float = 1e-12

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("series order must be >= 0")
        if self.tol < 0.0:
            raise ValueError("tol must be >= 0")


@dataclass(frozen=True)
class IterateMode:
    """Low-order passes with degree truncation, repeated to tolerance.

    ``order``       terms per pass (the M of an Mth-order iteration)
    ``truncation``  degree cap applied to every right-hand side
    ``tol``         stop once the mean-square residual falls below this
    ``max_iter``    pass budget
    """

    order: int = 5
    truncation: int = 100
    tol: float = 1e-12
    max_iter: int = 500

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("iteration order must be >= 1")
        if self.truncation < 2:
            raise ValueError("truncation degree must be >= 2")
        if self.tol < 0.0:
            raise ValueError("tol must be >= 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


def check_control(c1: float, c2: float):
    """Convergence-control values must be nonzero finite reals."""
    for name, c in (("c1", c1), ("c2", c2)):
        if not math.isfinite(c) or c == 0.0:
            raise ValueError(f"{name} must be a nonzero finite real, got {c}")


def check_precision(precision: str):
    if precision not in PRECISIONS:
        raise ValueError(f"precision {precision!r} not one of {PRECISIONS}")
