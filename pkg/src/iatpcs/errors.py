"""Exception hierarchy shared by the library and the CLI."""


class IatError(Exception):
    """Base class for all package errors."""


class DomainError(IatError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class ValidationError(IatError, ValueError):
    """A plan, sample or configuration violates one of its invariants."""


class NonexistenceError(IatError, ArithmeticError):
    """An estimator or posterior does not exist for the given data."""
