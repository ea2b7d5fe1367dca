"""
Error types for the scheduling lab.
Every failure raised by the library derives from SchedulingError.
"""

from typing import Any, Optional


class SchedulingError(Exception):
    """Base class for all scheduling lab errors."""


class MalformedInputError(SchedulingError):
    """Input could not be parsed or references something that does not exist."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class InvalidInstanceError(SchedulingError):
    """An instance failed validation where a valid instance is required."""

    def __init__(self, violations: list):
        self.violations = list(violations)
        summary = "; ".join(str(v) for v in self.violations[:3])
        more = f" (+{len(self.violations) - 3} more)" if len(self.violations) > 3 else ""
        super().__init__(f"Instance is invalid: {summary}{more}")


class InfeasibleScheduleError(SchedulingError):
    """A schedule breaks a window or overlap constraint."""


class SolverGuardError(SchedulingError):
    """A solver refused an instance because of a size or node guard."""


class ContractViolationError(SchedulingError):
    """An online algorithm returned a plan the simulator cannot accept."""

    def __init__(self, message: str, entry: Any = None):
        self.entry = entry
        super().__init__(message if entry is None else f"{message}: {entry}")


class AdversaryError(SchedulingError):
    """An adversary emitted a job it is not allowed to emit."""


class ParameterError(SchedulingError):
    """A construction or generator was called outside its preconditions."""
