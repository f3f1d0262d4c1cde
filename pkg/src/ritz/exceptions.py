"""Exception types raised across the package."""


class RitzError(Exception):
    """Base class for every error this package raises deliberately."""


class NegativeOperand(RitzError):
    """Square root of a negative value was requested."""


class PrecisionUnsupported(RitzError):
    """Requested precision exceeds the stored-constant budget."""


class DimensionMismatch(RitzError):
    """Operands have incompatible shapes."""


class ZeroPivot(RitzError):
    """A leading minor is singular, so the factorization cannot proceed."""

    def __init__(self, index: int):
        super().__init__(f"zero pivot: leading minor {index} is singular")
        self.index = index


class NoConvergence(RitzError):
    """An iterative eigensolver exhausted its iteration budget."""


class NotPositiveDefinite(RitzError):
    """The operation requires a positive definite matrix."""


class SingularOverlap(RitzError):
    """The overlap matrix is singular or not positive definite."""


class ZeroNorm(RitzError):
    """A vector has nonpositive norm in the overlap metric."""


class InsufficientNodes(RitzError):
    """Too few quadrature nodes to integrate the polynomial exactly."""


class UnsupportedLambda(RitzError):
    """No reference spectrum is available for this potential strength."""


class StateCountMismatch(RitzError):
    """The reference spectrum covers fewer states than requested."""
