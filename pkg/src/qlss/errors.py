"""Exception types raised across the library."""


class QlssError(Exception):
    """Base class for all qlss errors."""


class NotSquare(QlssError):
    """Matrix is not square."""


class NotHermitian(QlssError):
    """Matrix fails the Hermitian tolerance check."""


class RankDeficient(QlssError):
    """QR factor has a diagonal below the rank tolerance."""


class DimensionMismatch(QlssError):
    """Operands have incompatible dimensions."""


class SingularMatrix(QlssError):
    """Matrix is numerically singular."""


# solve_linear and the embedding builders document this under the shorter name.
Singular = SingularMatrix


class InvalidSpec(QlssError):
    """Generator spec violates its constraints."""


class ParseError(QlssError):
    """Instance file is malformed."""


class NormalizationError(QlssError):
    """Loaded matrix is not normalized to unit spectral norm."""


class WrongClass(QlssError):
    """Instance matrix class does not match the requested embedding."""


class OutOfRange(QlssError):
    """Scalar argument outside its domain."""


class InvalidP(QlssError):
    """Schedule exponent p outside the supported range."""


class InvalidPlan(QlssError):
    """Evolution plan violates its invariants."""


class InvalidConfig(QlssError):
    """Optimizer or sweep configuration is invalid."""


class TargetUnreachable(QlssError):
    """Runtime search exhausted its budget without reaching the target."""


class DegenerateFit(QlssError):
    """Log-log fit is underdetermined."""
