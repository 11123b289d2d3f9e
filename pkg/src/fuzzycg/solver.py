"""Polak-Ribiere conjugate gradient with a fuzzy step weight and periodic restart.

Minimizes ``E(x) = 0.5 * ||A x - b||**2`` for any m x n system. Each
iterate moves as ``x_{k+1} = x_k + alpha_k * v_k * d_k`` where ``v_k`` is a
scalar fuzzy weight in ``[v_min, 1]`` and the gradient is carried in scaled
form ``g_k = grad E(x_k) / v_k``. The conjugacy history is discarded every
``n`` iterations (``n`` = number of unknowns) and the search resumes along
the steepest-descent direction from the current iterate.

With ``v == 1`` this is CG on the normal equations (CGNR); started from zero
it converges to the minimum-norm least-squares solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import tsk
from .errors import Converged, DimensionMismatch, NullSpaceDirection
from .linalg import (
    FlopCounter,
    as_vector,
    dot,
    matvec,
    norm2,
    normal_apply,
    residual,
    transpose_matvec,
)
from .report import IterationRecord, SolveReport

_TINY = np.finfo(np.float64).tiny


@dataclass(frozen=True)
class ConstantWeight:
    value: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.value <= 1.0):
            raise ValueError(f"constant weight must lie in (0, 1], got {self.value}")


@dataclass(frozen=True)
class MaxActivationWeight:
    """Weight = largest unnormalized rule activation of a TSK model at x."""

    model: tsk.TSKModel


@dataclass(frozen=True)
class SolverOptions:
    epsilon: float = 1e-10
    max_restarts: int = 100
    weight_source: ConstantWeight | MaxActivationWeight = field(default_factory=ConstantWeight)
    v_min: float = 1e-6
    x0: np.ndarray | None = None
    nonnegative_beta: bool = False

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")
        if self.max_restarts < 1:
            raise ValueError("max_restarts must be a positive integer")
        if not (0.0 < self.v_min <= 1.0):
            raise ValueError("v_min must lie in (0, 1]")


def cost(system, x, counter=None):
    """``0.5 * ||A x - b||**2``."""
    r = residual(system, np.asarray(x, dtype=np.float64), counter)
    val = 0.5 * dot(r, r, counter)
    if counter is not None:
        counter.add(0, 1)
    return val


def fuzzy_weight(source, x, v_min=1e-6):
    if isinstance(source, ConstantWeight):
        v = source.value
    elif isinstance(source, MaxActivationWeight):
        v = float(np.max(tsk.rule_activations(source.model, x)))
    else:
        raise TypeError(f"unknown weight source {source!r}")
    return min(1.0, max(v_min, v))


def scaled_gradient(system, x, v, counter=None, Atb=None):
    """``(A^T A x - A^T b) / v``; pass a cached ``Atb`` to skip one product."""
    if Atb is None:
        Atb = transpose_matvec(system.A, system.b, counter)
    g = (normal_apply(system.A, x, counter) - Atb) / v
    if counter is not None:
        counter.add(system.n, system.n)
    return g


def line_search_alpha(system, g, d, v, counter=None):
    """Exact minimizer of ``E(x + alpha * v * d)`` when ``g = grad E(x) / v``.

    ``alpha = -(v * g.d) / (v * ||A d||**2)``; the weight appears in both
    numerator and denominator, so the step ``alpha * v * d`` does not depend
    on the scale of ``v`` once ``g`` and ``d`` carry the matching ``1/v``.
    """
    Ad = matvec(system.A, d, counter)
    dAd = dot(Ad, Ad, counter)
    if dAd <= _TINY:
        raise NullSpaceDirection("search direction lies in the null space of A")
    gd = dot(g, d, counter)
    if counter is not None:
        counter.add(0, 3)
    return -(v * gd) / (v * dAd)


def pr_beta(g_next, g_prev, counter=None):
    """Polak-Ribiere coefficient ``g1.(g1 - g0) / g0.g0``."""
    denom = dot(g_prev, g_prev, counter)
    if denom <= _TINY:
        raise Converged("previous gradient vanished")
    num = dot(g_next, g_next - g_prev, counter)
    if counter is not None:
        counter.add(g_next.size, 1)
    return num / denom


def solve(system, options=None):
    """Run the restarted fuzzy-weighted Polak-Ribiere iteration on ``system``.

    Terminates when ``||v_k * d_k|| < epsilon * max(1, ||A^T b||)`` or after
    ``max_restarts * n`` iterations; in the latter case the report has
    ``converged=False``. The weighted norm is used so the stopping point
    does not move with the scale of a constant weight.
    """
    opts = options or SolverOptions()
    A, n = system.A, system.n
    if isinstance(opts.weight_source, MaxActivationWeight) and opts.weight_source.model.input_count != n:
        raise DimensionMismatch(
            f"fuzzy model has {opts.weight_source.model.input_count} inputs but the system has {n} unknowns"
        )

    counter = FlopCounter()
    if opts.x0 is None:
        x = np.zeros(n)
    else:
        x = np.array(as_vector(opts.x0, "x0"))
        if x.shape != (n,):
            raise DimensionMismatch(f"x0 has length {x.size}, system has {n} unknowns")

    Atb = transpose_matvec(A, system.b, counter)
    threshold = opts.epsilon * max(1.0, norm2(Atb))
    budget = opts.max_restarts * n

    trace = []
    iterates = [x.copy()]
    k = 0
    restarts = 0
    converged = False

    while True:
        # Steps 1-3: (re)start from the current iterate along steepest descent
        v = fuzzy_weight(opts.weight_source, x, opts.v_min)
        g = scaled_gradient(system, x, v, counter, Atb)
        d = -g
        if v * norm2(d, counter) < threshold:
            converged = True
            break

        stalled = False
        for inner in range(n):
            if k >= budget:
                break
            before = counter.total
            E_k = cost(system, x)
            d_norm = norm2(d)
            try:
                alpha = line_search_alpha(system, g, d, v, counter)
            except NullSpaceDirection:
                # a fresh steepest-descent direction cannot be annihilated unless g == 0
                stalled = inner == 0
                break

            # Step 4
            x = x + (alpha * v) * d
            counter.add(n, n + 1)
            # Step 5
            v_next = fuzzy_weight(opts.weight_source, x, opts.v_min)
            g_next = scaled_gradient(system, x, v_next, counter, Atb)
            # Step 6
            try:
                beta = pr_beta(g_next, g, counter)
            except Converged:
                beta = 0.0
            if opts.nonnegative_beta:
                beta = max(beta, 0.0)
            d = -g_next + beta * d
            counter.add(n, n)

            trace.append(IterationRecord(k, E_k, d_norm, alpha, beta, v, counter.total - before))
            iterates.append(x.copy())
            g, v = g_next, v_next
            k += 1

            if v * norm2(d, counter) < threshold:
                converged = True
                break

        if converged or stalled or k >= budget:
            break
        # Step 7
        restarts += 1

    r = residual(system, x)
    return SolveReport(
        solution=x,
        iterations=k,
        restarts=restarts,
        residual_norm=float(np.linalg.norm(r)),
        flops=counter,
        converged=converged,
        trace=trace,
        iterates=iterates,
        solver="fcg",
    )
