"""Classical comparison solvers: Jacobi, Gauss-Seidel and an SVD pseudoinverse."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverInputError
from .linalg import FlopCounter, as_matrix, as_vector
from .report import IterationRecord, SolveReport

_EPS = np.finfo(np.float64).eps
DIVERGENCE_FACTOR = 1e6


@dataclass(frozen=True)
class StationaryOptions:
    tolerance: float = 5e-5
    max_iterations: int = 1000
    x0: np.ndarray | None = None

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be a positive integer")


def _check_square(system):
    if system.m != system.n:
        raise SolverInputError(f"stationary methods need a square system, got {system.m}x{system.n}")
    diag = np.diag(system.A)
    if np.any(diag == 0):
        raise SolverInputError(f"zero diagonal entry at row {int(np.flatnonzero(diag == 0)[0])}")
    return diag


def jacobi_sweep(system, x, counter=None):
    A, b = system.A, system.b
    diag = np.diag(A)
    off = A @ x - diag * x
    if counter is not None:
        n = system.n
        counter.add(n * (n - 1) + n, n * (n - 1) + n)
    return (b - off) / diag


def gauss_seidel_sweep(system, x, counter=None):
    A, b = system.A, system.b
    x = np.array(x, dtype=np.float64)
    n = system.n
    for i in range(n):
        s = A[i, :i] @ x[:i] + A[i, i + 1 :] @ x[i + 1 :]
        x[i] = (b[i] - s) / A[i, i]
    if counter is not None:
        counter.add(n * (n - 1) + n, n * (n - 1) + n)
    return x


def _stationary(system, opts, sweep, name):
    opts = opts or StationaryOptions()
    _check_square(system)
    n = system.n
    x = np.zeros(n) if opts.x0 is None else np.array(as_vector(opts.x0, "x0"))
    if x.shape != (n,):
        raise SolverInputError(f"x0 has length {x.size}, system has {n} unknowns")

    counter = FlopCounter()
    trace, iterates = [], [x.copy()]
    converged = False
    first_step = None
    k = 0
    # Sweep k maps x_k to x_{k+1}. When the step falls below tolerance the
    # previous iterate was already converged, so that confirming sweep is not
    # counted; its (slightly better) result is still returned.
    while k < opts.max_iterations:
        before = counter.total
        x_next = sweep(system, x, counter)
        step = x_next - x
        step_inf = float(np.max(np.abs(step)))
        if step_inf < opts.tolerance:
            x = x_next
            converged = True
            break
        if first_step is None:
            first_step = step_inf
        r = system.A @ x - system.b
        trace.append(IterationRecord(k, 0.5 * float(r @ r), float(np.linalg.norm(step)), flops=counter.total - before))
        x = x_next
        iterates.append(x.copy())
        k += 1
        if not np.all(np.isfinite(x)) or step_inf > DIVERGENCE_FACTOR * first_step:
            break

    r = system.A @ x - system.b
    return SolveReport(
        solution=x,
        iterations=k,
        restarts=0,
        residual_norm=float(np.linalg.norm(r)) if np.all(np.isfinite(r)) else float("inf"),
        flops=counter,
        converged=converged,
        trace=trace,
        iterates=iterates,
        solver=name,
    )


def jacobi(system, options=None):
    """Jacobi iteration; stops when the max-norm step drops below tolerance."""
    return _stationary(system, options, jacobi_sweep, "jacobi")


def gauss_seidel(system, options=None):
    """Gauss-Seidel iteration (in-place sweep over rows in order)."""
    return _stationary(system, options, gauss_seidel_sweep, "gs")


@dataclass(frozen=True)
class SVDResult:
    """Thin SVD ``A = U @ diag(s) @ V.T`` with ``k = min(m, n)`` columns.

    Columns of ``U`` that belong to an exactly zero singular value are zero.
    """

    U: np.ndarray
    s: np.ndarray
    V: np.ndarray
    threshold: float

    @property
    def rank(self):
        return int(np.sum(self.s > self.threshold))

    def reconstruct(self):
        return (self.U * self.s) @ self.V.T


def _hestenes(W, max_sweeps):
    """Orthogonalize the columns of W in place by plane rotations; return V."""
    q = W.shape[1]
    V = np.eye(q)
    for _ in range(max_sweeps):
        rotated = False
        for i in range(q - 1):
            for j in range(i + 1, q):
                a = W[:, i] @ W[:, i]
                b = W[:, j] @ W[:, j]
                c = W[:, i] @ W[:, j]
                if c == 0.0 or abs(c) <= _EPS * np.sqrt(a * b):
                    continue
                rotated = True
                zeta = (b - a) / (2.0 * c)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.hypot(1.0, zeta))
                cs = 1.0 / np.hypot(1.0, t)
                sn = cs * t
                wi = W[:, i].copy()
                W[:, i] = cs * wi - sn * W[:, j]
                W[:, j] = sn * wi + cs * W[:, j]
                vi = V[:, i].copy()
                V[:, i] = cs * vi - sn * V[:, j]
                V[:, j] = sn * vi + cs * V[:, j]
        if not rotated:
            break
    return V


def svd(A, max_sweeps=100):
    """One-sided Jacobi SVD.

    Works on whichever of ``A`` / ``A.T`` is tall, so the rotations act on
    the shorter dimension.
    """
    A = as_matrix(A, "A")
    m, n = A.shape
    flip = m < n
    W = np.array(A.T if flip else A, dtype=np.float64)
    V = _hestenes(W, max_sweeps)

    s = np.linalg.norm(W, axis=0)
    order = np.argsort(-s, kind="stable")
    s, W, V = s[order], W[:, order], V[:, order]
    U = np.zeros_like(W)
    nz = s > 0
    U[:, nz] = W[:, nz] / s[nz]
    if flip:
        U, V = V, U
    threshold = max(m, n) * _EPS * (s[0] if s.size else 0.0)
    return SVDResult(U, s, V, threshold)


def pinv_solve(system):
    """Minimum-norm least-squares solution ``V @ pinv(S) @ U.T @ b``."""
    res = svd(system.A)
    keep = res.s > res.threshold
    coeff = (res.U[:, keep].T @ system.b) / res.s[keep]
    return res.V[:, keep] @ coeff


def pinv_report(system):
    x = pinv_solve(system)
    r = system.A @ x - system.b
    return SolveReport(
        solution=x,
        iterations=0,
        restarts=0,
        residual_norm=float(np.linalg.norm(r)),
        flops=FlopCounter(),
        converged=True,
        solver="svd",
    )


__all__ = [
    "SVDResult",
    "StationaryOptions",
    "gauss_seidel",
    "gauss_seidel_sweep",
    "jacobi",
    "jacobi_sweep",
    "pinv_report",
    "pinv_solve",
    "svd",
]
