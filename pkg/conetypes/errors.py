"""Exception hierarchy shared by services, routes and commands.

Every error carries the process exit code the command line reports for it:
1 for usage mistakes, 2 for unparsable words, 3 when a resource cap is hit and
4 when a verification fails.
"""
from __future__ import annotations

from typing import Optional

EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_RESOURCE = 3
EXIT_VERIFICATION = 4


class ConeTypesError(Exception):
    """Base class for all domain errors."""

    exit_code = EXIT_USAGE
    http_status = 400


class PreconditionError(ConeTypesError):
    """An operation was called outside its domain."""


class DimensionMismatchError(ConeTypesError):
    """A vector or block does not match the dimensions of a matrix system."""


class WordParseError(ConeTypesError):
    """A word string could not be parsed under the letter syntax."""

    exit_code = EXIT_PARSE

    def __init__(self, message: str, position: Optional[int] = None) -> None:
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ResourceLimitError(ConeTypesError):
    """A ball or enumeration would exceed the configured element cap."""

    exit_code = EXIT_RESOURCE
    http_status = 413


class VerificationError(ConeTypesError):
    """A computed object disagrees with what it is checked against."""

    exit_code = EXIT_VERIFICATION
    http_status = 422


class ClassificationError(VerificationError):
    """No representative, or more than one, matches an element's fingerprint."""


class SuccessorConflictError(VerificationError):
    """Two successor rules, or two generators, compete for the same transition."""


class NonConvergenceError(VerificationError):
    """Power iteration did not reach the requested residual."""


class PrimitivityError(VerificationError):
    """A matrix power expected to be positive has a zero entry."""


class FixtureError(VerificationError):
    """A fixture file is missing or malformed."""
