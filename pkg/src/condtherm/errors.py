"""Exception hierarchy shared by all modules."""


class CondThermError(Exception):
    """Base class for errors raised by this package."""


class PreconditionError(CondThermError, ValueError):
    """Input violates a structural precondition (shape, Hermiticity, unitarity)."""


class DomainError(CondThermError, ValueError):
    """Input is outside the mathematical domain of the requested quantity."""


class ConsistencyError(CondThermError, RuntimeError):
    """An identity that must hold analytically failed numerically."""
