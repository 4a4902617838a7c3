class DegenerateBodyError(ValueError):
    """Raised when an operation needs a full-dimensional body and gets a flat one."""


class InvalidMeasureError(ValueError):
    """Raised when a measure cannot be the surface area measure of a body."""


class SolverStalled(RuntimeError):
    """The Minkowski solver did not reach its area tolerance."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
