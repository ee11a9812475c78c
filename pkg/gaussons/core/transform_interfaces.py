"""
Interfaces for the exact invariances of the equation.

A transform maps a solution u(t, .) to another solution, evaluated at the
same time t. Applied at t = 0 it maps initial data; applied at time t to an
evolved field it predicts the evolution of the transformed datum, which is
what commutation checks compare against.
"""

from abc import ABC, abstractmethod

from gaussons.models.data_models import TransformKind, WaveField


class ITransform(ABC):
    """Abstract interface for a time-dependent invariance transform."""

    kind: TransformKind

    @abstractmethod
    def apply(self, u: WaveField, t: float) -> WaveField:
        """
        Apply the transform to a solution evaluated at time t.

        Args:
            u: The solution at time t
            t: Time at which u is evaluated

        Returns:
            WaveField: The transformed solution at time t
        """
        pass

    @abstractmethod
    def inverse(self) -> "ITransform":
        """The transform that undoes this one at every time."""
        pass

    @abstractmethod
    def is_identity(self) -> bool:
        pass

    @property
    def name(self) -> str:
        """Short label used in reports, the value of kind."""
        return self.kind.value
