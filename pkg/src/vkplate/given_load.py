"""Prescribed-load solver: given the load number Q, find the deflected state.

The zeroth-order guess is the load image itself scaled by the control
value, ``phi0 = Q * c * K[1]``, with no membrane force.  The series
mode sums deformation orders directly; the iterate mode repeats short
truncated passes until the residual meets tolerance.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .config import (
    DEFAULT_GRID,
    DIVERGENCE_ERR,
    IterateMode,
    SeriesMode,
    check_control,
    check_precision,
)
from .ham import HomotopyState, deformation_step, iterate_pass, residual_error
from .kernels import BoundarySpec, load_forcing
from .physics import deflection_scale
from .polyseries import PolySeries, deflection_series
from .report import IterationRecord, RunReport


@dataclass(frozen=True)
class GivenLoadProblem:
    """A prescribed-load run: load number, control values, mode, boundary."""

    load: float
    c1: float
    c2: float
    mode: SeriesMode | IterateMode
    boundary: BoundarySpec = BoundarySpec()
    grid_size: int = DEFAULT_GRID
    precision: str = "double"
    divergence_err: float = DIVERGENCE_ERR

    def __post_init__(self):
        if not math.isfinite(self.load):
            raise ValueError("load must be finite")
        check_control(self.c1, self.c2)
        check_precision(self.precision)
        if self.grid_size < 1:
            raise ValueError("grid_size must be >= 1")

    @classmethod
    def with_c0(cls, load, c0, mode, **kw):
        """Single-control shorthand: c1 = c2 = c0."""
        return cls(load, c0, c0, mode, **kw)


def empirical_c0(load: float, iterated: bool = False) -> float:
    """Fitted control value for a load number.

    ``-13 / (13 + Q**2)`` works well for the plain series at moderate
    loads; ``-23 / (Q + 23)`` for the truncated iteration at large ones.
    """
    if iterated:
        return -23.0 / (load + 23.0)
    return -13.0 / (13.0 + load * load)


def initial_slope(load: float, c0: float, boundary: BoundarySpec) -> PolySeries:
    """Zeroth-order slope guess Q * c0 * ((lam + 1) y - y**2) / 2."""
    return load_forcing(boundary).scaled(load * c0)


def _center_ratio(phi: PolySeries, nu: float) -> float:
    # W(0) = -integral of phi/y; report it in thickness units
    return abs(phi.integral_over_y()) / deflection_scale(nu)


def _samples(phi: PolySeries):
    w = deflection_series(phi)
    return [(float(y), w.evaluate(float(y))) for y in np.linspace(0.0, 1.0, 11)]


def _config_echo(problem) -> dict:
    mode = problem.mode
    cfg = {
        "solver": "given_load",
        "load": problem.load,
        "c1": problem.c1,
        "c2": problem.c2,
        "boundary": problem.boundary.kind,
        "nu": problem.boundary.nu,
        "grid_size": problem.grid_size,
        "precision": problem.precision,
    }
    if isinstance(mode, SeriesMode):
        cfg["mode"] = "series"
        cfg["order"] = mode.order
    else:
        cfg.update(mode="iterate", order=mode.order, truncation=mode.truncation,
                   tol=mode.tol, max_iter=mode.max_iter)
    return cfg


def solve(problem: GivenLoadProblem) -> RunReport:
    """Run the configured mode and report per-step history plus the solution."""
    b = problem.boundary
    q = problem.load
    extended = problem.precision == "extended"
    phi0 = initial_slope(q, problem.c1, b)
    s0 = PolySeries.zero(extended=extended)
    if extended:
        phi0 = phi0.to_extended()
    state = HomotopyState.for_load(phi0, s0, q, problem.c1, problem.c2)

    records = []
    t0 = time.perf_counter()

    def clock_ms():
        return (time.perf_counter() - t0) * 1e3

    def push(iteration, order, phi, s):
        err = residual_error(phi, s, q, b, problem.grid_size).err
        records.append(IterationRecord(iteration, order, err, q,
                                       _center_ratio(phi, b.nu), clock_ms()))
        return err

    mode = problem.mode
    status = "max_iter"
    if isinstance(mode, SeriesMode):
        phi_t, s_t = phi0, s0
        err = push(0, 0, phi_t, s_t)
        for k in range(1, mode.order + 1):
            deformation_step(state, k, b)
            phi_t = phi_t + state.phi_terms[k]
            s_t = s_t + state.s_terms[k]
            err = push(k, k, phi_t, s_t)
            if not math.isfinite(err) or err > problem.divergence_err:
                status = "diverged"
                break
        else:
            status = "converged" if err <= mode.tol else "max_iter"
    else:
        phi_t, s_t = phi0, s0
        err = math.inf
        for it in range(1, mode.max_iter + 1):
            state = iterate_pass(state, mode.order, mode.truncation, b)
            phi_t, s_t = state.phi_terms[0], state.s_terms[0]
            err = push(it, it * mode.order, phi_t, s_t)
            if not math.isfinite(err) or err > problem.divergence_err:
                status = "diverged"
                break
            if err <= mode.tol:
                status = "converged"
                break

    return RunReport(
        config=_config_echo(problem),
        history=records,
        phi=phi_t,
        s=s_t,
        q=q,
        w0_over_h=_center_ratio(phi_t, b.nu),
        status=status,
        deflection_samples=_samples(phi_t),
    )
