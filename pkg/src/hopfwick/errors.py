"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``ValidationError`` -> 2,
``EnumerationGuardError`` -> 3.
"""


class HopfError(Exception):
    """Base class for all library errors."""


class ValidationError(HopfError, ValueError):
    """Input violates a documented precondition or format."""


class PreconditionError(ValidationError):
    """A functional lacks a required property (e.g. unital, character)."""


class TruncationError(ValidationError):
    """A functional was evaluated above its truncation degree."""


class MissingValueError(ValidationError):
    """A table-backed functional has no entry for a required basis element."""


class ParseError(ValidationError):
    """Text could not be parsed; ``position`` is the 0-based offset."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class EnumerationGuardError(HopfError):
    """A combinatorial enumeration would exceed its size guard."""
