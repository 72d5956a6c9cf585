"""Run reports and their serialized forms.

Per-iteration history rows use the fixed CSV schema
``iteration,order,err,q,w0_over_h,wall_ms``; deflection curves use
``y,r_over_Ra,W,w_over_h``.  Numbers are written with shortest
round-trip repr, so identical runs produce identical bytes; wall-clock
columns can be zeroed out (``deterministic=True``) when byte-stable
artifacts matter more than timing.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

HISTORY_COLUMNS = ("iteration", "order", "err", "q", "w0_over_h", "wall_ms")
CURVE_COLUMNS = ("y", "r_over_Ra", "W", "w_over_h")

#: Terminal states of a run.
STATUSES = ("converged", "max_iter", "diverged")


@dataclass
class IterationRecord:
    iteration: int
    order: int
    err: float
    q: float
    w0_over_h: float
    wall_ms: float = 0.0


@dataclass
class RunReport:
    """Everything a solve produced: config echo, history, final solution."""

    config: dict
    history: list
    phi: object
    s: object
    q: float
    w0_over_h: float
    status: str
    deflection_samples: list = field(default_factory=list)
    restriction_defect: float | None = None

    @property
    def err(self) -> float:
        return self.history[-1].err if self.history else float("nan")

    @property
    def iterations(self) -> int:
        return self.history[-1].iteration if self.history else 0

    def iterations_to(self, threshold: float):
        """First iteration whose residual is at or below threshold, or None."""
        for rec in self.history:
            if rec.err <= threshold:
                return rec.iteration
        return None


def fmt_float(x) -> str:
    if isinstance(x, float):
        return repr(float(x))
    return str(x)


def history_csv(report: RunReport, deterministic: bool = False) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(HISTORY_COLUMNS)
    for rec in report.history:
        wall = 0.0 if deterministic else rec.wall_ms
        w.writerow([rec.iteration, rec.order, fmt_float(rec.err), fmt_float(rec.q),
                    fmt_float(rec.w0_over_h), fmt_float(wall)])
    return out.getvalue()


def curve_csv(rows) -> str:
    """Rows of (y, r_over_Ra, W, w_over_h) as CSV text."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CURVE_COLUMNS)
    for row in rows:
        w.writerow([fmt_float(v) for v in row])
    return out.getvalue()


def report_json(report: RunReport, deterministic: bool = False) -> str:
    payload = {
        "config": report.config,
        "status": report.status,
        "q": report.q,
        "w0_over_h": report.w0_over_h,
        "err": report.err,
        "history": [
            {
                "iteration": rec.iteration,
                "order": rec.order,
                "err": rec.err,
                "q": rec.q,
                "w0_over_h": rec.w0_over_h,
                "wall_ms": 0.0 if deterministic else rec.wall_ms,
            }
            for rec in report.history
        ],
        "phi_coeffs": [float(c) for c in report.phi.coeffs],
        "s_coeffs": [float(c) for c in report.s.coeffs],
        "deflection_samples": [[y, wv] for y, wv in report.deflection_samples],
    }
    if report.phi.lo is not None:
        payload["phi_coeffs_lo"] = [float(c) for c in report.phi.lo]
        payload["s_coeffs_lo"] = [float(c) for c in report.s.lo]
    if report.restriction_defect is not None:
        payload["restriction_defect"] = report.restriction_defect
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def emit_report(report: RunReport, fmt: str = "csv", path=None,
                deterministic: bool = False) -> str:
    """Serialize a report; write to ``path`` when given, return the text."""
    if fmt == "csv":
        text = history_csv(report, deterministic=deterministic)
    elif fmt == "json":
        text = report_json(report, deterministic=deterministic)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
