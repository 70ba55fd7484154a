"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Raised when an experiment configuration cannot be parsed or validated."""


class InvariantViolation(RuntimeError):
    """Raised when a numerical invariant (unitarity, PSD, ...) fails at runtime."""
