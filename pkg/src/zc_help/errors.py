"""
Error Hierarchy

Every failure the engine reports carries a stable category string and the
exit code the CLI maps it to.
"""

from typing import Optional


class HelpError(Exception):
    """Base class for all engine errors."""

    category: str = "error"
    exit_code: int = 3

    def __init__(self, message: str, *, detail: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def to_dict(self) -> dict:
        """Machine-readable form used by the CLI diagnostics."""
        payload = {"category": self.category, "message": self.message}
        if self.detail:
            payload["detail"] = self.detail
        return payload


# Data errors (exit 3)


class ParseError(HelpError):
    """Malformed group file syntax (bad JSON, bad literal)."""

    category = "parse-error"


class GroupValidationError(HelpError):
    """A group file violates a named invariant."""

    category = "validation-error"

    def __init__(self, invariant: str, message: str, *, detail: Optional[str] = None):
        super().__init__(f"{invariant}: {message}", detail=detail)
        self.invariant = invariant

    def to_dict(self) -> dict:
        payload = super().to_dict()
        payload["invariant"] = self.invariant
        return payload


class DataIOError(HelpError):
    """A file could not be read or written."""

    category = "io-error"


class DataError(HelpError):
    """Structurally valid data lacks an entry an operation needs."""

    category = "data-error"


class InvalidArgumentError(HelpError):
    category = "invalid-argument"


class InvalidAutomorphismError(HelpError):
    category = "invalid-automorphism"


class NotPRegularError(HelpError):
    category = "not-p-regular"


class IncompleteAssignmentError(HelpError):
    category = "incomplete-assignment"


class UnboundedVariableError(HelpError):
    """Interval propagation could not bound a partial augmentation."""

    category = "unbounded-variable"

    def __init__(self, variables: list[str]):
        super().__init__(
            "propagation left variables unbounded: " + ", ".join(variables)
        )
        self.variables = variables


# Configuration errors (exit 4)


class ConfigurationError(HelpError):
    category = "configuration-error"
    exit_code = 4


class DependencyError(ConfigurationError):
    """A required quotient or divisor verdict is missing."""

    category = "dependency-error"
