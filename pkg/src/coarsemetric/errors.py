"""Exception types shared across the package."""


class CoarseMetricError(ValueError):
    """Base class for every error raised by this package."""


class GroundMismatchError(CoarseMetricError):
    """Two relations (or metrics) live on different ground sets."""


class CapacityError(CoarseMetricError):
    """An exhaustive construction would exceed a configured size limit."""


class HypothesisError(CoarseMetricError):
    """A precondition of a construction does not hold for the input."""


class NotABaseError(CoarseMetricError):
    """A family fails to be a base; ``member`` names the offending relation."""

    def __init__(self, message, member=None):
        super().__init__(message)
        self.member = member


class FormatError(CoarseMetricError):
    """Malformed text input, with a 1-based line and column."""

    def __init__(self, message, line=0, column=0, source="<input>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.source = source
