"""Base exception for absentia."""


class AbsentiaError(Exception):
    """Root of every error raised by absentia modules."""
