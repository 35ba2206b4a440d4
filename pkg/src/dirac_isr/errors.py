"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain where an operation is defined."""


class DegenerateOrderError(DomainError):
    """Hermite order is zero where a formula divides by it."""


class ConvergenceError(ArithmeticError):
    """An iterative evaluation did not converge.

    ``partial`` carries the best estimate reached before giving up.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ContinuityError(ArithmeticError):
    """Assembled bound state is not continuous at the origin."""

    def __init__(self, message, mismatch):
        super().__init__(message)
        self.mismatch = mismatch


class NoBoundStatesError(RuntimeError):
    """The requested family/branch has no bound states."""


class StiffnessError(ArithmeticError):
    """Adaptive integrator step size underflowed."""
