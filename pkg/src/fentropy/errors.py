"""Exception types raised across the package."""


class FEntropyError(Exception):
    """Base class for all package errors."""


class ValidationError(FEntropyError, ValueError):
    """Input failed a structural invariant."""


class SymmetryError(ValidationError):
    pass


class TraceError(ValidationError):
    pass


class PositivityError(ValidationError):
    pass


class SimplexError(ValidationError):
    pass


class DimensionError(ValidationError):
    pass


class DomainError(ValidationError):
    """A value lies outside the domain of the function applied to it."""


class ParameterError(ValidationError):
    pass


class ConditionError(ValidationError):
    """Standing conditions of the reduction step are not met."""


class NumericalError(FEntropyError, ArithmeticError):
    """An iterative routine failed to converge or self-checks disagreed."""
