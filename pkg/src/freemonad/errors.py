class MonadError(ValueError):
    """Structurally malformed input (shapes, degrees, dimension, field)."""


class FormatError(MonadError):
    """A monad file that cannot be parsed; ``code`` names the failure."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class InternalConsistencyError(RuntimeError):
    """Two independent computations disagreed; signals an engine defect."""
