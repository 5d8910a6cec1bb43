class ValidityError(ValueError):
    """Raised when inputs fall outside the region where a formula applies."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative eigensolver fails to reach its residual tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
