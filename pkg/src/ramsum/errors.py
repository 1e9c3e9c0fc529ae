"""Shared exception types."""


class ArityError(ValueError):
    """Argument tuple length does not match what the operation expects."""


class ResourceLimitError(RuntimeError):
    """Requested computation exceeds the configured size ceiling."""
