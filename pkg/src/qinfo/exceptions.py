"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when an object violates its defining constraints."""


class DimensionMismatchError(ValidationError):
    """Raised when operands live on incompatible spaces."""


class EnumerationCapError(ValidationError):
    """Raised when an exhaustive enumeration would exceed the configured cap."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative solver hits its iteration cap.

    The best iterate found so far is attached as ``best``.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
