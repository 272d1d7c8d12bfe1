from __future__ import annotations

from typing import Tuple


class ExitSpectraError(Exception):
    """Base class for all errors raised by the package.

    Attributes:
        exit_status (int): Process exit status the command line maps this error to.
    """

    exit_status: int = 3


class HypothesisViolationError(ExitSpectraError):
    """A theorem's hypothesis fails, so the bound is not asserted."""

    exit_status = 1


class ValidationError(ExitSpectraError):
    """Invalid input: ranges, expressions, mesh files, configurations."""

    exit_status = 2


class DomainError(ValidationError):
    """An argument lies outside the domain where an operation is defined."""


class UsageError(ValidationError):
    """An operation was called with incompatible arguments."""


class ExpressionSyntaxError(ValidationError):
    """A radial expression failed to parse.

    Attributes:
        text (str): The offending expression.
        position (int): Zero based character offset of the error.
    """

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        caret = " " * position + "^"
        super().__init__(f"{message}\n  {text}\n  {caret}")


class MeshParseError(ValidationError):
    """A mesh file could not be parsed.

    Attributes:
        line_number (int): One based line number of the error.
    """

    def __init__(self, message: str, line_number: int):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class NumericalError(ExitSpectraError):
    """A numerical procedure failed (non-convergence, loss of positivity)."""

    exit_status = 3


class QuadratureError(NumericalError):
    """Quadrature did not reach its tolerance.

    Attributes:
        worst_interval (Tuple[float, float]): Subinterval with the largest error estimate.
        error_estimate (float): Error estimate on that subinterval.
    """

    def __init__(
        self, message: str, worst_interval: Tuple[float, float], error_estimate: float
    ):
        self.worst_interval = worst_interval
        self.error_estimate = error_estimate
        super().__init__(
            f"{message} (worst interval [{worst_interval[0]:.6g}, "
            f"{worst_interval[1]:.6g}], error estimate {error_estimate:.3g})"
        )


class SimulationTimeoutError(NumericalError):
    """A simulated path exhausted its step budget before exiting."""
