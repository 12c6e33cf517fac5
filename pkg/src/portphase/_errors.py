"""Exception hierarchy shared by all portphase modules."""


class PortphaseError(Exception):
    """Base class for all library errors."""


class NotSectorialError(PortphaseError):
    """Matrix is not sectorial (numerical range contains the origin)."""


class NotSemiSectorialError(PortphaseError):
    """Matrix is not even semi-sectorial (origin interior to numerical range)."""


class IllDefinedError(PortphaseError):
    """Generalized Schur complement is not well-defined (range/kernel inclusion fails)."""


class NotExistsError(IllDefinedError):
    """Connection result does not exist for the given inputs."""


class DimensionMismatchError(PortphaseError):
    """Operand dimensions are incompatible."""


class SingularPivotError(PortphaseError):
    """Subtraction pivot block is singular or numerically unusable."""


class PoleHitError(PortphaseError):
    """Rational matrix evaluated on (or too close to) a pole."""


class InvalidRangeError(PortphaseError):
    """Invalid frequency range for grid construction."""


class InvalidIntervalError(PortphaseError):
    """Phase interval violates its width/ordering constraints."""


class HullTooWideError(PortphaseError):
    """Union of phase intervals cannot fit in a half-plane cone (width > pi)."""


class OverlapError(PortphaseError):
    """Phase intervals overlap mod 2*pi where disjointness is required."""


class NoValidSignError(PortphaseError):
    """Neither +pi nor -pi shift yields a subtraction interval of width < pi."""


class InvalidConfluenceError(PortphaseError):
    """Matrix quadruple does not represent a valid confluence."""


class RankDeficientParameterError(PortphaseError):
    """Parametrization matrix that must be nonsingular is rank deficient."""
