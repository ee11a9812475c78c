"""
Exception hierarchy for gaussons.

Errors that signal an invalid request (bad configuration, wrong regime, an
inadequate grid) also subclass ValueError so callers can treat them like any
other argument error. Errors raised mid-computation carry the time at which
the run stopped being trustworthy.
"""

from typing import Optional


class GaussonsError(RuntimeError):
    """Base class for every error raised by this package."""


class ConfigError(GaussonsError, ValueError):
    """Unknown configuration key, malformed value, or invalid physical parameters."""


class RegimeError(GaussonsError, ValueError):
    """The (lambda, omega) regime does not admit the requested object."""


class GridResolutionError(GaussonsError, ValueError):
    """The grid truncates or under-resolves the field it is asked to carry."""


class StepRejected(GaussonsError):
    """
    The tau integrator saw a first-integral jump larger than its gate.

    The caller is expected to reduce the step and retry.
    """

    def __init__(self, message: str, time: float, drift: float):
        super().__init__(message)
        self.time = time
        self.drift = drift


class WidthCollapse(GaussonsError):
    """The tau integrator predicted a non-positive width."""

    def __init__(self, message: str, time: float):
        super().__init__(message)
        self.time = time


class BoundaryLeak(GaussonsError):
    """
    Mass reached the edge of the periodic box.

    Raised by the solver when the outer band of the box holds more than the
    configured fraction of the mass, and by spectral shifts that would move a
    field by more than the box allows.
    """

    def __init__(
        self, message: str, time: Optional[float] = None, fraction: float = 0.0
    ):
        super().__init__(message)
        self.time = time
        self.fraction = fraction


class InconclusiveClassification(GaussonsError):
    """The classification horizon ran out before a verdict was reached."""

    def __init__(self, message: str, horizon: float):
        super().__init__(message)
        self.horizon = horizon
