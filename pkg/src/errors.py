"""
Error types raised by boxkit.

All of them derive from ValueError so callers that only care about
"bad input" can keep catching that.
"""


class BoxkitError(ValueError):
    """Base class for every validation failure raised by the toolkit."""


class InvalidBoxError(BoxkitError):
    """A box violates x1 <= x2 / y1 <= y2, or has zero area where area is required."""


class InvalidConfigError(BoxkitError):
    """A configuration value is outside its allowed range."""


class DomainError(BoxkitError):
    """A numeric argument is outside the mathematical domain of a function."""


class NoGroundTruthError(BoxkitError):
    """The miss rate is undefined because no ground truth survived subset filtering."""


class RecordParseError(BoxkitError):
    """A line-delimited JSON record could not be parsed."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
