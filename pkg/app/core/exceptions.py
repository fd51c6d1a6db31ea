"""
Exception Hierarchy
Every error raised by the library carries the CLI exit code it maps to.
"""
from typing import Any, Dict, Optional


class VintageError(Exception):
    """Base class for all library errors."""

    exit_code: int = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "exit_code": self.exit_code,
            "details": self.details,
        }


class ParameterError(VintageError, ValueError):
    """Invalid parameter, lag, age or cohort."""

    exit_code = 1


class HistoryCoverageError(ParameterError):
    """Dividend or return history does not cover the required window."""


class DegenerateInputError(ParameterError):
    """Input is valid in type but degenerate (empty group, collinear regressors)."""


class SolverConvergenceError(VintageError):
    """Root finding failed; details hold the last residual and iteration count."""

    exit_code = 2

    def __init__(self, message: str, residual: float, iterations: int, method: str = ""):
        super().__init__(
            message,
            details={"residual": residual, "iterations": iterations, "method": method},
        )
        self.residual = residual
        self.iterations = iterations
        self.method = method


class DataFileError(VintageError):
    """Unreadable or malformed input file."""

    exit_code = 3
