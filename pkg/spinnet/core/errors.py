"""
Exception hierarchy shared by the services, the CLI and the HTTP layer.
"""
from typing import Optional


class SpinNetworkError(Exception):
    """Base class for every simulator failure."""

    error_code: str = "SIMULATION_ERROR"

    def __init__(self, message: str, error_code: Optional[str] = None):
        super().__init__(message)
        self.message = message
        if error_code is not None:
            self.error_code = error_code


class NetworkValidationError(SpinNetworkError, ValueError):
    """An input violates a structural or numerical precondition."""

    error_code = "VALIDATION_ERROR"


class ConvergenceError(SpinNetworkError):
    """The eigensolver ran out of sweeps before reaching tolerance."""

    error_code = "CONVERGENCE_ERROR"
