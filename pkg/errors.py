"""Exceptions raised across the solver modules."""

from typing import Any, Optional, Tuple


class SplitMonoError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(SplitMonoError, ValueError):
    """Non-finite data, non-positive step sizes and similar bad arguments."""


class DimError(InvalidInput):
    """Vector or operator dimensions do not match."""


class MetricNotPositive(SplitMonoError):
    """A metric that must lie in P_alpha for some alpha > 0 does not."""

    def __init__(self, message: str, min_eigenvalue: Optional[float] = None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class NoConvergence(SplitMonoError):
    """An iteration hit its budget before meeting its stopping rule."""

    def __init__(self, message: str, last_residual: float = float("nan"), trace: Any = None):
        super().__init__(message)
        self.last_residual = last_residual
        self.trace = trace


class ConstraintViolated(SplitMonoError):
    """A parameter inequality required by an algorithm fails."""

    def __init__(self, constraint: str, detail: str = ""):
        message = f"constraint violated: {constraint}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)
        self.constraint = constraint
        self.detail = detail


class SolutionInvalid(SplitMonoError):
    """A reference primal-dual pair fails the optimality conditions."""

    def __init__(self, message: str, residuals: Tuple[float, float] = (float("nan"), float("nan"))):
        super().__init__(message)
        self.residuals = residuals
