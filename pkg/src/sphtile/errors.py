"""Exception types shared across the package."""


class SphtileError(Exception):
    """Base class for all package errors."""


class DomainError(SphtileError, ValueError):
    """An argument lies outside the domain of an operation."""


class IllConditioned(SphtileError):
    """A root could not be bracketed inside the admissible interval."""


class StructuralError(SphtileError):
    """A half-edge mesh violates a structural invariant."""


class ClosureFailure(SphtileError):
    """A tiling does not close up on the sphere with the given angles."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class BudgetExceeded(SphtileError):
    """The classifier exceeded its node cap."""

    def __init__(self, message, report=None, nodes=None):
        super().__init__(message)
        self.report = report
        self.nodes = nodes
