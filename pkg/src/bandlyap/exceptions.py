"""Exception types raised by the solvers."""


class BandlyapError(Exception):
    """Base class for all package errors."""


class ShapeMismatchError(BandlyapError, ValueError):
    pass


class NotSPDError(BandlyapError):
    """A matrix required to be symmetric positive definite is not."""


class SingularPivotError(BandlyapError):
    """Unpivoted LDL^T met a pivot below the guard threshold.

    For shifted matrices ``t*A - xi*I`` this usually means the shift is
    too close to the spectrum.
    """


class BreakdownError(BandlyapError):
    pass


class DegenerateIntervalError(BandlyapError):
    pass


class EllipseConsistencyError(BandlyapError):
    pass


class TauSelectionError(BandlyapError):
    """No admissible tau for the requested bandwidth and threshold."""


class QuadratureError(BandlyapError):
    pass
