"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the operation is defined."""


class SolverError(RuntimeError):
    """An iterative solve did not converge.

    ``residual`` holds the last residual vector seen by the solver.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class CapabilityError(NotImplementedError):
    """Requested combination of dimension and data representation is not supported."""


class ConsistencyError(RuntimeError):
    """An internal invariant failed; indicates a bug rather than bad input."""
