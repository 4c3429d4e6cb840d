"""
Microtrap Gates Error Hierarchy

All errors raised by the package derive from MicrotrapError so callers
(and the CLI) can separate configuration problems from numerical ones:

- ConfigError / SchemaError     -> CLI exit code 2
- NumericalError and subclasses -> CLI exit code 3
- DomainError                   -> invalid arguments (also a ValueError)
"""

from typing import Optional


class MicrotrapError(Exception):
    """Base class for every error raised by microtrap_gates."""


# ============================================================================
# CONFIGURATION ERRORS
# ============================================================================

class ConfigError(MicrotrapError):
    """Configuration file missing, unreadable, or invalid."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class SchemaError(ConfigError):
    """A serialized artifact (sequence, embedding) has a malformed field."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}", key=field_name)
        self.field_name = field_name


# ============================================================================
# NUMERICAL ERRORS
# ============================================================================

class NumericalError(MicrotrapError):
    """A numerical procedure failed."""


class ConvergenceError(NumericalError):
    """Iterative solver did not reach its tolerance."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (residual={residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


class InstabilityError(NumericalError):
    """Trap parameters do not give a stable, cell-confined crystal."""


class InfiniteRateError(NumericalError):
    """Two non-empty pulse groups coincide in time."""


class RoutingError(NumericalError):
    """A required qubit pair cannot be brought together on the embedding."""


# ============================================================================
# ARGUMENT ERRORS
# ============================================================================

class DomainError(MicrotrapError, ValueError):
    """Argument outside the domain of an operation."""


class UnsupportedGeometryError(DomainError):
    """Operation only defined for a specific array geometry."""


class UnsupportedSizeError(DomainError):
    """Problem too large for a dense-matrix procedure."""


EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_ERROR = 3


def exit_code_for(error: BaseException) -> int:
    """Map an exception onto the CLI exit code."""
    if isinstance(error, (ConfigError, DomainError)):
        return EXIT_CONFIG_ERROR
    if isinstance(error, NumericalError):
        return EXIT_NUMERICAL_ERROR
    return 1
