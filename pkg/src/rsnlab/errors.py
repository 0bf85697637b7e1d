"""Exception types shared across the package."""


class RsnError(Exception):
    """Base class for all package errors."""


class DomainError(RsnError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ResourceError(RsnError, RuntimeError):
    """A brute-force routine was asked for more than its configured cap."""


class NumericError(RsnError, ArithmeticError):
    """A numerical routine failed to converge or hit a forbidden singularity."""


class InvariantError(RsnError, AssertionError):
    """A structural invariant was violated (ties in a tableau, bad pairing, ...)."""
