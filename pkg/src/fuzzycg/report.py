"""Solve reports and their text / JSON renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .linalg import FlopCounter

REPORT_SCHEMA = {
    "type": "object",
    "required": ["solution", "iterations", "restarts", "residual_norm", "flops", "converged", "trace"],
    "properties": {
        "solution": {"type": "array", "items": {"type": "number"}, "minItems": 1},
        "iterations": {"type": "integer", "minimum": 0},
        "restarts": {"type": "integer", "minimum": 0},
        "residual_norm": {"type": "number", "minimum": 0},
        "flops": {
            "type": "object",
            "required": ["add", "mul"],
            "properties": {
                "add": {"type": "integer", "minimum": 0},
                "mul": {"type": "integer", "minimum": 0},
            },
        },
        "converged": {"type": "boolean"},
        "trace": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["k", "E", "d_norm", "alpha", "beta", "v"],
                "properties": {
                    "k": {"type": "integer", "minimum": 0},
                    "E": {"type": "number"},
                    "d_norm": {"type": "number", "minimum": 0},
                    # stationary solvers have no step length, PR coefficient or fuzzy weight
                    "alpha": {"type": ["number", "null"]},
                    "beta": {"type": ["number", "null"]},
                    "v": {"type": ["number", "null"], "exclusiveMinimum": 0},
                },
            },
        },
    },
}


@dataclass(frozen=True)
class IterationRecord:
    """One pass of the iteration body.

    For the CG solver ``d_norm`` is the 2-norm of the search direction; for
    the stationary solvers it is the 2-norm of the step ``x_{k+1} - x_k``.
    """

    k: int
    E: float
    d_norm: float
    alpha: float | None = None
    beta: float | None = None
    v: float | None = None
    flops: int = 0


@dataclass
class SolveReport:
    solution: np.ndarray
    iterations: int
    restarts: int
    residual_norm: float
    flops: FlopCounter
    converged: bool
    trace: list[IterationRecord] = field(default_factory=list)
    iterates: list[np.ndarray] = field(default_factory=list, repr=False)
    solver: str = "fcg"

    def flops_per_iteration(self):
        if not self.trace:
            return 0.0
        return float(np.mean([r.flops for r in self.trace]))

    def to_dict(self):
        return {
            "solution": [float(v) for v in self.solution],
            "iterations": int(self.iterations),
            "restarts": int(self.restarts),
            "residual_norm": float(self.residual_norm),
            "flops": {"add": int(self.flops.additions), "mul": int(self.flops.multiplications)},
            "converged": bool(self.converged),
            "trace": [
                {"k": r.k, "E": r.E, "d_norm": r.d_norm, "alpha": r.alpha, "beta": r.beta, "v": r.v}
                for r in self.trace
            ],
        }


def _fmt(value):
    return "-" if value is None else f"{value:.6e}"


def format_text(report):
    lines = [f"{'k':>5}  {'E':>14}  {'|d|':>14}  {'alpha':>14}  {'beta':>14}  {'v':>14}"]
    for r in report.trace:
        lines.append(
            f"{r.k:>5}  {_fmt(r.E):>14}  {_fmt(r.d_norm):>14}  {_fmt(r.alpha):>14}"
            f"  {_fmt(r.beta):>14}  {_fmt(r.v):>14}"
        )
    lines.append("")
    lines.append(f"solver        : {report.solver}")
    lines.append(f"converged     : {report.converged}")
    lines.append(f"iterations    : {report.iterations}")
    lines.append(f"restarts      : {report.restarts}")
    lines.append(f"residual norm : {report.residual_norm:.6e}")
    lines.append(f"flops         : {report.flops.additions} add, {report.flops.multiplications} mul")
    lines.append("solution      : [" + ", ".join(f"{v:.10g}" for v in report.solution) + "]")
    return "\n".join(lines)


def emit_report(report, format="text"):
    if format == "json":
        return json.dumps(report.to_dict(), indent=2)
    if format == "text":
        return format_text(report)
    raise ValueError(f"unknown report format {format!r}")
