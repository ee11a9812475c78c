"""
Exact invariances of the equation with repulsive potential.

Each transform maps a solution u(t, .) to another solution evaluated at the
same time:

    size:         c u(t, x) e^{-i t lam ln|c|^2}
    galilean:     u(t, x - v sinh(w t)/w) e^{i cosh(w t) v.x - i |v|^2 sinh(2 w t)/(4 w)}
    translation:  u(t, x - x0 cosh(w t)) e^{i w sinh(w t) x0.x - i w |x0|^2 sinh(2 w t)/4}

Spatial shifts are applied in Fourier space, so they need not be multiples
of the grid step. Products of one-dimensional solutions solve the
two-dimensional equation, which tensor_product builds.
"""

import math
from typing import Sequence, Tuple, Union

import numpy as np
from scipy import fft

from gaussons.core.errors import BoundaryLeak
from gaussons.core.transform_interfaces import ITransform
from gaussons.models.data_models import Grid, TransformKind, WaveField

Vector = Union[float, Sequence[float]]


def as_vector(v: Vector, dim: int) -> Tuple[float, ...]:
    """
    Promote a scalar to a vector along the first axis.

    >>> as_vector(0.5, 2)
    (0.5, 0.0)
    >>> as_vector([1, 2], 2)
    (1.0, 2.0)
    """
    if isinstance(v, (int, float)):
        return (float(v),) + (0.0,) * (dim - 1)
    out = tuple(float(c) for c in v)
    if len(out) != dim:
        raise ValueError(f"vector {out} has {len(out)} components, expected {dim}")
    return out


def _dot(a: Sequence[float], b: Sequence[float]) -> float:
    return float(sum(x * y for x, y in zip(a, b)))


def _linear_form(grid: Grid, v: Sequence[float]) -> np.ndarray:
    """v . x sampled on the grid."""
    return sum(c * x for c, x in zip(v, grid.coordinates()))


def spectral_shift(u: WaveField, shift: Vector) -> WaveField:
    """
    Return u(x - shift) by phase multiplication in Fourier space.

    Raises:
        BoundaryLeak: If a component of the shift exceeds half the box
    """
    grid = u.grid
    s = as_vector(shift, grid.dim)
    if not any(s):
        return u
    if max(abs(c) for c in s) > grid.length / 2.0:
        raise BoundaryLeak(
            f"[spectral_shift] shift {s} exceeds half the box length {grid.length / 2.0}"
        )
    xi = np.meshgrid(*([grid.frequencies()] * grid.dim), indexing="ij")
    phase = np.exp(-1j * sum(c * k for c, k in zip(s, xi)))
    return u.with_values(fft.ifftn(fft.fftn(u.values) * phase))


def apply_size(u: WaveField, c: complex, t: float, lam: float) -> WaveField:
    """
    Size gauge c u e^{-i t lam ln|c|^2}.

    For real c > 0 on a stationary Gausson this generates the solitary wave
    of frequency nu = -lam ln c^2.
    """
    if c == 0:
        raise ValueError("the size transform needs c != 0")
    if c == 1:
        return u
    factor = c * np.exp(-1j * t * lam * math.log(abs(c) ** 2))
    return u.with_values(factor * u.values)


def apply_galilean(u: WaveField, v: Vector, t: float, omega: float) -> WaveField:
    """
    Galilean boost adapted to the repulsive potential.

    At t = 0 it is the multiplication by e^{i v.x}.

    Raises:
        ValueError: If omega <= 0 (the flat-space boost is not provided)
        BoundaryLeak: If the shift v sinh(omega t)/omega exceeds the box
    """
    if omega <= 0:
        raise ValueError("the Galilean transform needs omega > 0")
    vec = as_vector(v, u.grid.dim)
    if not any(vec):
        return u
    wt = omega * t
    shifted = spectral_shift(u, tuple(c * math.sinh(wt) / omega for c in vec))
    phase = math.cosh(wt) * _linear_form(u.grid, vec) - _dot(vec, vec) * math.sinh(
        2.0 * wt
    ) / (4.0 * omega)
    return shifted.with_values(shifted.values * np.exp(1j * phase))


def apply_translation(u: WaveField, x0: Vector, t: float, omega: float) -> WaveField:
    """
    Space translation adapted to the repulsive potential.

    At t = 0 it is the shift by x0.

    Raises:
        BoundaryLeak: If the shift x0 cosh(omega t) exceeds the box
    """
    if omega < 0:
        raise ValueError("omega must be non-negative")
    vec = as_vector(x0, u.grid.dim)
    if not any(vec):
        return u
    wt = omega * t
    shifted = spectral_shift(u, tuple(c * math.cosh(wt) for c in vec))
    if wt == 0.0:
        return shifted
    phase = omega * math.sinh(wt) * _linear_form(u.grid, vec) - omega * _dot(
        vec, vec
    ) * math.sinh(2.0 * wt) / 4.0
    return shifted.with_values(shifted.values * np.exp(1j * phase))


def tensor_product(factors: Sequence[WaveField]) -> WaveField:
    """
    Two-dimensional field u1(x1) u2(x2) from two one-dimensional factors.

    Raises:
        ValueError: Wrong number of factors or incompatible grids
    """
    if len(factors) != 2:
        raise ValueError(f"tensor_product takes two factors, got {len(factors)}")
    first, second = factors
    if first.grid.dim != 1 or first.grid != second.grid:
        raise ValueError(
            f"factors need the same one-dimensional grid: {first.grid} vs {second.grid}"
        )
    grid = Grid(length=first.grid.length, points=first.grid.points, dim=2)
    return WaveField(grid=grid, values=np.multiply.outer(first.values, second.values))


class SizeTransform(ITransform):
    """Size gauge with constant c."""

    kind = TransformKind.SIZE

    def __init__(self, c: complex, lam: float):
        if c == 0:
            raise ValueError("the size transform needs c != 0")
        self.c = c
        self.lam = lam

    def apply(self, u: WaveField, t: float) -> WaveField:
        return apply_size(u, self.c, t, self.lam)

    def inverse(self) -> "SizeTransform":
        return SizeTransform(1.0 / self.c, self.lam)

    def is_identity(self) -> bool:
        return self.c == 1

    def __repr__(self) -> str:
        return f"SizeTransform(c={self.c}, lam={self.lam})"


class GalileanTransform(ITransform):
    """Galilean boost with velocity v."""

    kind = TransformKind.GALILEAN

    def __init__(self, v: Vector, omega: float):
        if omega <= 0:
            raise ValueError("the Galilean transform needs omega > 0")
        self.v = v
        self.omega = omega

    def apply(self, u: WaveField, t: float) -> WaveField:
        return apply_galilean(u, self.v, t, self.omega)

    def inverse(self) -> "GalileanTransform":
        if isinstance(self.v, (int, float)):
            return GalileanTransform(-self.v, self.omega)
        return GalileanTransform(tuple(-c for c in self.v), self.omega)

    def is_identity(self) -> bool:
        if isinstance(self.v, (int, float)):
            return self.v == 0
        return not any(self.v)

    def __repr__(self) -> str:
        return f"GalileanTransform(v={self.v}, omega={self.omega})"


class TranslationTransform(ITransform):
    """Space translation by x0."""

    kind = TransformKind.TRANSLATION

    def __init__(self, x0: Vector, omega: float):
        if omega < 0:
            raise ValueError("omega must be non-negative")
        self.x0 = x0
        self.omega = omega

    def apply(self, u: WaveField, t: float) -> WaveField:
        return apply_translation(u, self.x0, t, self.omega)

    def inverse(self) -> "TranslationTransform":
        if isinstance(self.x0, (int, float)):
            return TranslationTransform(-self.x0, self.omega)
        return TranslationTransform(tuple(-c for c in self.x0), self.omega)

    def is_identity(self) -> bool:
        if isinstance(self.x0, (int, float)):
            return self.x0 == 0
        return not any(self.x0)

    def __repr__(self) -> str:
        return f"TranslationTransform(x0={self.x0}, omega={self.omega})"
