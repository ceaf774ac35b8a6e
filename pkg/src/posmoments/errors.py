"""Exception hierarchy shared by every module."""


class PosMomentsError(Exception):
    """Base class for all package errors."""


class ShapeError(PosMomentsError, ValueError):
    """Matrix dimensions are incompatible with the requested operation."""


class ValidationError(PosMomentsError, ValueError):
    """Input violates a structural invariant (Hermiticity, trace, ...)."""


class DomainError(PosMomentsError, ValueError):
    """A parameter lies outside the domain of a family or operation."""


class ConvergenceError(PosMomentsError, ArithmeticError):
    """An iterative kernel failed to converge, or a numerical guard tripped."""
