"""Edge statistics of uniformly random sorting networks.

Sampling (Edelman-Greene over hook-walk tableaux), exact small-n checks,
anti-symmetric Gaussian corners, correlation kernels and Fredholm-determinant
limit laws.
"""
from .errors import DomainError, InvariantError, NumericError, ResourceError, RsnError

__version__ = "0.1.0"

__all__ = ["DomainError", "InvariantError", "NumericError", "ResourceError", "RsnError", "__version__"]
