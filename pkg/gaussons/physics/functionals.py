"""
Conserved and auxiliary functionals evaluated on gridded fields.

Integrals use the rectangle rule on the periodic grid, which is spectrally
accurate for smooth fields that vanish at the box edge. Gradients are taken
in Fourier space.

The logarithm of the density is floored relative to the density maximum:
ln(rho + reg * max rho). The same floor is used by the solver, so the
discrete energy here is the one the simulated dynamics conserve.
"""

import numpy as np
from scipy import fft

from gaussons.models.data_models import PhysParams, WaveField

DEFAULT_REG = 1e-14


def log_density(rho: np.ndarray, reg: float = DEFAULT_REG) -> np.ndarray:
    """
    Floored logarithm ln(rho + reg * max rho).

    Points where the floored argument is zero (an all-zero field, or
    reg = 0 at vacuum points) get 0, which makes rho * ln(rho) vanish there.

    >>> log_density(np.array([1.0, 0.0]), reg=0.0).tolist()
    [0.0, 0.0]
    """
    peak = float(rho.max()) if rho.size else 0.0
    arg = rho + reg * peak
    out = np.zeros_like(arg, dtype=float)
    np.log(arg, out=out, where=arg > 0)
    return out


def integrate(u: WaveField, density: np.ndarray) -> float:
    """Rectangle-rule integral of a real density over the box."""
    return float(np.sum(density) * u.grid.cell_volume)


def density(u: WaveField) -> np.ndarray:
    return np.abs(u.values) ** 2


def mass(u: WaveField) -> float:
    """Squared L2 norm."""
    return integrate(u, density(u))


def inner_product(u: WaveField, v: WaveField) -> complex:
    """<u, v> = integral of conj(u) v."""
    _check_same_grid(u, v)
    return complex(np.sum(np.conj(u.values) * v.values) * u.grid.cell_volume)


def gradient_norm2(u: WaveField) -> float:
    """||grad u||^2 computed spectrally (Parseval)."""
    coeffs = fft.fftn(u.values)
    xi2 = u.grid.frequency_squared()
    return float(np.sum(xi2 * np.abs(coeffs) ** 2) / u.values.size * u.grid.cell_volume)


def moment2(u: WaveField) -> float:
    """Second moment integral |x|^2 |u|^2."""
    return integrate(u, u.grid.radius_squared() * density(u))


def entropy(u: WaveField, reg: float = DEFAULT_REG) -> float:
    """Integral of rho ln(rho), rho = |u|^2, with the floored logarithm."""
    rho = density(u)
    return integrate(u, rho * log_density(rho, reg))


def potential_energy(u: WaveField, params: PhysParams) -> float:
    """Integral of V |u|^2."""
    if params.potential_factor == 0.0:
        return 0.0
    return params.potential_factor * moment2(u)


def energy(u: WaveField, params: PhysParams, reg: float = DEFAULT_REG) -> float:
    """
    E(u) = 1/2 ||grad u||^2 + int V |u|^2 + lam int |u|^2 (ln|u|^2 - 1).

    For the repulsive sign the potential term is -omega^2/2 ||x u||^2.
    """
    kinetic = 0.5 * gradient_norm2(u)
    nonlinear = params.lam * (entropy(u, reg) - mass(u)) if params.lam else 0.0
    return kinetic + potential_energy(u, params) + nonlinear


def sigma_norm(u: WaveField) -> float:
    """Squared Sigma norm: mass + gradient term + second moment."""
    return mass(u) + gradient_norm2(u) + moment2(u)


def center_of_mass(u: WaveField, axis: int = 0) -> float:
    """<x_axis> weighted by |u|^2; 0 for the zero field."""
    m = mass(u)
    if m == 0.0:
        return 0.0
    return integrate(u, u.grid.coordinates()[axis] * density(u)) / m


def variance(u: WaveField) -> float:
    """Spread <|x - <x>|^2> summed over axes; 0 for the zero field."""
    m = mass(u)
    if m == 0.0:
        return 0.0
    rho = density(u)
    total = 0.0
    for x in u.grid.coordinates():
        mean = integrate(u, x * rho) / m
        total += integrate(u, (x - mean) ** 2 * rho) / m
    return total


def supnorm(u: WaveField) -> float:
    return float(np.max(np.abs(u.values))) if u.values.size else 0.0


def mod_distance(u: WaveField, phi: WaveField) -> float:
    """
    inf over theta of ||u - e^{i theta} phi||.

    The optimal theta aligns the phase of <phi, u>. The difference is then
    evaluated directly, which equals sqrt(||u||^2 + ||phi||^2 - 2|<u, phi>|)
    without its cancellation when u is close to phi.
    """
    overlap = inner_product(phi, u)
    rotation = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    diff = u.values - rotation * phi.values
    return float(np.sqrt(np.sum(np.abs(diff) ** 2) * u.grid.cell_volume))


def l2_distance(u: WaveField, v: WaveField) -> float:
    _check_same_grid(u, v)
    return float(
        np.sqrt(np.sum(np.abs(u.values - v.values) ** 2) * u.grid.cell_volume)
    )


def _check_same_grid(u: WaveField, v: WaveField) -> None:
    if u.grid != v.grid:
        raise ValueError(f"fields live on different grids: {u.grid} vs {v.grid}")
