"""Exception hierarchy for GapLab.

Promise violations and encoding mismatches are never raised; they are
returned as report data. Exceptions signal malformed input or exhausted
resources.
"""


class GapLabError(Exception):
    """Base class for all GapLab errors."""


class DomainError(GapLabError):
    """An argument lies outside the declared domain of an operation."""


class InvalidSpecError(GapLabError):
    """A target specification breaks its invariants (zero target, overlap)."""


class ResourceError(GapLabError):
    """A configured size bound would be exceeded."""


class BudgetExceededError(ResourceError):
    """An enumeration ran past its candidate or evaluation budget."""


class InvalidDeckError(GapLabError):
    """A deck mixes card sizes or is empty."""


class ModelViolationError(GapLabError):
    """An oracle machine re-queries a string on one computation path."""


class EncodingError(GapLabError):
    """A machine queries a string outside its declared universe."""


class PreconditionError(GapLabError):
    """A stage or claim precondition does not hold for the given fixture."""


class ParseError(GapLabError):
    """A DSL or JSON document could not be parsed."""

    def __init__(self, message: str, position: int | None = None) -> None:
        self.position = position
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
