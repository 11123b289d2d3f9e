"""Dense vector/matrix kernels with optional FLOP accounting.

Vectors and matrices are plain float64 numpy arrays. The ``as_vector`` and
``as_matrix`` constructors validate shape and finiteness and hand back
read-only arrays, so a value built here cannot be mutated behind a solver's
back. Every kernel accepts an optional :class:`FlopCounter`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonFiniteEntry

__all__ = [
    "FlopCounter",
    "LinearSystem",
    "SystemKind",
    "as_matrix",
    "as_vector",
    "classify",
    "dot",
    "matvec",
    "norm2",
    "norm_inf",
    "normal_apply",
    "residual",
    "transpose_matvec",
]


def _frozen(a):
    a.setflags(write=False)
    return a


def as_vector(values, name="vector"):
    v = np.array(values, dtype=np.float64)
    if v.ndim != 1 or v.size < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 1-D sequence, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteEntry(f"{name} has non-finite entries")
    return _frozen(v)


def as_matrix(values, name="matrix"):
    a = np.array(values, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteEntry(f"{name} has non-finite entries")
    return _frozen(a)


@dataclass
class FlopCounter:
    """Running tally of scalar additions and multiplications.

    Divisions count as multiplications and subtractions as additions.
    """

    additions: int = 0
    multiplications: int = 0

    def add(self, additions=0, multiplications=0):
        self.additions += int(additions)
        self.multiplications += int(multiplications)

    def reset(self):
        self.additions = 0
        self.multiplications = 0

    @property
    def total(self):
        return self.additions + self.multiplications

    def snapshot(self):
        return FlopCounter(self.additions, self.multiplications)


def _count(counter, additions=0, multiplications=0):
    if counter is not None:
        counter.add(additions, multiplications)


class SystemKind(enum.Enum):
    EXACTLY_DETERMINED = "exactly-determined"
    UNDERDETERMINED = "underdetermined"
    OVERDETERMINED = "overdetermined"


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """The system ``A x = b`` with ``A`` of shape (m, n)."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        b = as_vector(self.b, "b")
        if A.shape[0] != b.shape[0]:
            raise DimensionMismatch(f"A has {A.shape[0]} rows but b has {b.shape[0]} entries")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]

    def __eq__(self, other):
        if not isinstance(other, LinearSystem):
            return NotImplemented
        return (
            self.A.shape == other.A.shape
            and np.array_equal(self.A, other.A)
            and np.array_equal(self.b, other.b)
        )

    __hash__ = None


def matvec(A, x, counter=None):
    """Return ``A @ x``; costs m*n multiplications and m*(n-1) additions."""
    m, n = A.shape
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (n,):
        raise DimensionMismatch(f"matvec: A is {m}x{n} but x has shape {x.shape}")
    _count(counter, m * (n - 1), m * n)
    return A @ x


def transpose_matvec(A, y, counter=None):
    """Return ``A.T @ y`` without forming the transpose."""
    m, n = A.shape
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (m,):
        raise DimensionMismatch(f"transpose_matvec: A is {m}x{n} but y has shape {y.shape}")
    _count(counter, n * (m - 1), m * n)
    return y @ A


def normal_apply(A, d, counter=None):
    """Return ``A.T @ (A @ d)`` as two products; ``A.T @ A`` is never formed."""
    return transpose_matvec(A, matvec(A, d, counter), counter)


def dot(u, v, counter=None):
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise DimensionMismatch(f"dot: shapes {u.shape} and {v.shape} differ")
    _count(counter, u.size - 1, u.size)
    return float(u @ v)


def norm2(u, counter=None):
    return float(np.sqrt(dot(u, u, counter)))


def norm_inf(u):
    u = np.asarray(u, dtype=np.float64)
    return float(np.max(np.abs(u)))


def classify(system):
    if system.m == system.n:
        return SystemKind.EXACTLY_DETERMINED
    if system.n > system.m:
        return SystemKind.UNDERDETERMINED
    return SystemKind.OVERDETERMINED


def residual(system, x, counter=None):
    """Return ``A x - b``."""
    r = matvec(system.A, x, counter) - system.b
    _count(counter, system.m, 0)
    return r
