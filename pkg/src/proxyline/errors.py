"""Exception types shared across the library and CLI."""


class ProxylineError(Exception):
    """Base class for all library errors."""


class EmptyElectorateError(ProxylineError):
    """Raised when a median is requested over an empty electorate."""


class ConfigurationError(ProxylineError):
    """Raised on invalid policy/space combinations or bad engine settings."""


class ScenarioValidationError(ProxylineError):
    """Raised when a scenario file or scenario object fails validation.

    Carries a dotted field path so CLI diagnostics can point at the
    offending entry.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class InconsistentObservationError(ProxylineError):
    """Raised when a median-interval update produces an empty interval."""


class SamplingBudgetError(ProxylineError):
    """Raised when no consistent follower profile is found within budget."""


class GridBudgetError(ProxylineError):
    """Raised when a grid scan would exceed the point budget."""
