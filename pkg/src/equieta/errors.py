"""Exception types shared across the package."""


class EquietaError(Exception):
    """Base class for all package errors."""


class GroupMismatch(EquietaError, ValueError):
    """Two operands refer to different groups."""


class UnsupportedFamily(EquietaError, ValueError):
    """Unknown group family or parameter out of range."""


class NonRealCoefficient(EquietaError, ValueError):
    """A class function with non-real irreducible coefficients was handed
    to the torus projection."""


class ZeroAngleInPerp(EquietaError, ValueError):
    """A fixed direction (angle = 0 mod 2pi) was passed as part of the
    perpendicular rotation data."""


class ZeroConstantTerm(EquietaError, ZeroDivisionError):
    """Series inversion requires a nonzero constant term."""


class DegenerateWeight(EquietaError, ValueError):
    """A fixed-point rotation weight equals 1 (angle 0 mod 2pi)."""


class CutOnSpectrum(EquietaError, ValueError):
    """The eta cut coincides with an eigenvalue."""


class ExtrapolationDiverged(EquietaError, ArithmeticError):
    """Successive smoothed-sum extrapolants are not Cauchy."""


class QuadratureNonConvergence(EquietaError, ArithmeticError):
    """Successive quadrature refinements differ by more than tolerance."""


class GridTooCoarse(EquietaError, ValueError):
    """Two spectral crossings landed in a single grid cell."""


class RouteMismatch(EquietaError, AssertionError):
    """Two independent construction routes disagree; usually signals an
    inconsistent lift convention."""


class SchemaViolation(EquietaError, ValueError):
    """A JSON input does not conform to the declared schema."""
