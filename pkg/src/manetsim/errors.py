"""Exception types shared across the simulator."""


class ConfigurationError(ValueError):
    """A simulation parameter violates its invariant; message names the field."""


class InsufficientDataError(ValueError):
    """A metric was requested from a series/log too short to support it."""


class BracketError(ValueError):
    """A search bracket does not straddle the requested transition; widen the range."""


class OutputError(OSError):
    """Writing a result file failed; message carries the path."""
