"""Exception types shared across the package."""


class DimensionMismatch(ValueError):
    """Operands have incompatible shapes."""


class NonFiniteEntry(ValueError):
    """A vector or matrix contains NaN or infinity."""


class DegenerateActivation(ArithmeticError):
    """Every rule activation underflowed; the input lies outside all rule supports."""

    def __init__(self, message, sample_index=None):
        super().__init__(message)
        self.sample_index = sample_index


class NullSpaceDirection(ArithmeticError):
    """The search direction is (numerically) annihilated by A."""


class SolverInputError(ValueError):
    """The system is not admissible for the chosen solver (e.g. non-square for Jacobi)."""


class SystemFileError(ValueError):
    """Malformed linear-system text. ``line`` is 1-based, or None at end of input."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class Converged(Exception):
    """Raised internally when the previous gradient vanishes; not an error."""
