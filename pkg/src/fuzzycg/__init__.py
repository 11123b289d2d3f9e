"""Fuzzy-weighted Polak-Ribiere conjugate gradient for linear systems.

Also ships the TSK fuzzy model whose rule activations supply the step
weight, and Jacobi / Gauss-Seidel / SVD baselines for comparison.
"""

from .baselines import StationaryOptions, gauss_seidel, jacobi, pinv_solve, svd
from .errors import (
    DegenerateActivation,
    DimensionMismatch,
    NonFiniteEntry,
    NullSpaceDirection,
    SolverInputError,
    SystemFileError,
)
from .linalg import FlopCounter, LinearSystem, SystemKind, as_matrix, as_vector, classify
from .report import SolveReport, emit_report
from .solver import ConstantWeight, MaxActivationWeight, SolverOptions, solve
from .sysfile import parse_system, serialize_system
from .tsk import LearningRates, TrainingSample, TSKModel

__version__ = "0.1.0"
