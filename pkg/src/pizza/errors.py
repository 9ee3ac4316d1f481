"""Exception types shared across the package."""


class PizzaError(Exception):
    """Base class."""


class DomainError(PizzaError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ResourceError(PizzaError):
    """A configured size cap was exceeded."""


class SingularMatrixError(PizzaError, ArithmeticError):
    """Exact linear solve on a singular system."""


class ValidationError(PizzaError):
    """An object failed a structural check (root system axioms, certificate, ...)."""
