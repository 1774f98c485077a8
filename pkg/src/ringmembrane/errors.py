"""Exception hierarchy.

Input problems derive from :class:`ValidationError` (also a ``ValueError``);
numerical breakdowns derive from :class:`NumericalError`.  The CLI maps these
families onto exit codes 2, 3 and 4.
"""


class RingMembraneError(Exception):
    """Base class for all package errors."""


class ValidationError(RingMembraneError, ValueError):
    """An input violates a documented precondition."""


class DomainError(ValidationError):
    """A special function or determinant was asked for outside its domain."""


class DegenerateError(ValidationError):
    """A boundary matrix has rank below two (all minors vanish)."""


class NumericalError(RingMembraneError):
    """A computation could not produce a trustworthy answer."""


class NoSignChangeError(NumericalError, ValueError):
    """A root bracket does not straddle a sign change."""


class NotEnoughRootsError(NumericalError):
    def __init__(self, requested: int, found: int, lambda_max: float):
        self.requested = requested
        self.found = found
        self.lambda_max = lambda_max
        super().__init__(
            f"requested {requested} eigenvalues but found only {found} "
            f"sign changes below lambda_max={lambda_max:g}"
        )


class SingularProjectionError(NumericalError):
    """The quadric projection parameter reached |p| = 1."""


class OffQuadricError(NumericalError):
    """Coordinates fail the Plucker relation and cannot come from a matrix."""


class UnsupportedError(NumericalError):
    """Non-separated coordinates were passed where separated ones are required."""


class RankDeficientError(NumericalError):
    """The 3x4 frequency system lost rank 3; the conditions are not identifiable."""

    def __init__(self, message: str, singular_values=None):
        super().__init__(message)
        self.singular_values = singular_values
