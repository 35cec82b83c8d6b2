"""Exception hierarchy shared by all modules."""


class FrictionSwitchError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FrictionSwitchError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ExtrapolationError(DomainError):
    """A load lies outside the sampled domain of a characteristic curve."""


class CapacityError(DomainError):
    """A pin configuration does not fit the groove layout."""


class ConfigError(FrictionSwitchError, ValueError):
    """Invalid configuration. ``field`` names the offending key when known."""

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.reason = message
        self.field = field


class TraceFormatError(FrictionSwitchError, ValueError):
    """Malformed trace data (bad CSV, non-uniform timestamps, ...)."""


class InsufficientDataError(FrictionSwitchError, ValueError):
    """Not enough data to compute the requested quantity."""


class UnderdeterminedError(FrictionSwitchError, ValueError):
    """A fit has fewer samples than it needs for its free parameters."""
