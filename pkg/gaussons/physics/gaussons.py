"""
Closed forms for Gaussons.

A Gausson is phi_{k,nu}(x) = e^{-nu/(2 lam)} e^{-d k/(4 lam)} e^{-k |x|^2 / 2}
with k a positive root of k^2 + 2 lam k + omega^2 = 0 for the repulsive
potential (k^2 + 2 lam k - omega^2 = 0 for the confining one, k = -2 lam
without potential).
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy import fft

from gaussons.core.errors import GridResolutionError, RegimeError
from gaussons.models.data_models import (
    Branch,
    GaussonSpec,
    Grid,
    PhysParams,
    PotentialSign,
    Regime,
    WaveField,
    regime_of,
)
from gaussons.physics.functionals import DEFAULT_REG, log_density

logger = logging.getLogger(__name__)

TRUNCATION_LIMIT = 1e-12
POINTS_PER_ROOT_K = 4.0


def regime(params: PhysParams) -> Regime:
    """Regime of the repulsive equation implied by (lam, omega)."""
    return regime_of(params.lam, params.omega)


def gausson_k(params: PhysParams) -> Optional[Tuple[float, float]]:
    """
    Roots (k_minus, k_plus) of the Gausson equation, or None.

    For the repulsive potential the roots of k^2 + 2 lam k + omega^2 = 0 are
    -lam -+ sqrt(lam^2 - omega^2); k_minus is computed as omega^2 / k_plus to
    avoid cancellation. With omega = 0 and lam < 0 the pair is (0, -2 lam),
    where 0 is not a normalizable profile. The confining potential has a
    single positive root, returned twice.

    >>> k_minus, k_plus = gausson_k(PhysParams(lam=-2.0, omega=1.0))
    >>> round(k_minus, 6), round(k_plus, 6)
    (0.267949, 3.732051)
    >>> gausson_k(PhysParams(lam=-1.0, omega=1.0))
    (1.0, 1.0)
    >>> gausson_k(PhysParams(lam=-1.0, omega=2.0)) is None
    True
    """
    lam, omega = params.lam, params.omega
    if params.potential_sign == PotentialSign.CONFINING and omega > 0:
        if lam == 0.0:
            return None
        k = -lam + math.hypot(lam, omega)
        return (k, k)
    current = regime_of(lam, omega)
    if current == Regime.NO_STATIONARY:
        return None
    if current == Regime.FLAT_GAUSSON:
        return (0.0, -2.0 * lam)
    if current == Regime.DEGENERATE:
        return (omega, omega)
    k_plus = -lam + math.sqrt(lam * lam - omega * omega)
    return (omega * omega / k_plus, k_plus)


def make_gausson(
    params: PhysParams, branch: Branch = Branch.PLUS, nu: float = 0.0
) -> GaussonSpec:
    """
    Build the GaussonSpec of a given branch.

    Raises:
        RegimeError: If the regime has no Gausson on that branch
    """
    roots = gausson_k(params)
    if roots is None:
        raise RegimeError(
            f"no Gausson for lam={params.lam}, omega={params.omega} "
            f"({params.potential_sign.value} potential)"
        )
    k_minus, k_plus = roots
    if params.potential_sign == PotentialSign.CONFINING and params.omega > 0:
        return GaussonSpec(k=k_plus, nu=nu, branch=Branch.CONFINED)
    current = regime(params)
    if current == Regime.DEGENERATE:
        return GaussonSpec(k=k_plus, nu=nu, branch=Branch.DEGENERATE)
    if current == Regime.FLAT_GAUSSON:
        if branch == Branch.MINUS:
            raise RegimeError("the k_minus root vanishes without potential")
        return GaussonSpec(k=k_plus, nu=nu, branch=Branch.PLUS)
    if branch == Branch.MINUS:
        return GaussonSpec(k=k_minus, nu=nu, branch=Branch.MINUS)
    if branch == Branch.PLUS:
        return GaussonSpec(k=k_plus, nu=nu, branch=Branch.PLUS)
    raise RegimeError(f"branch {branch.value} does not exist in regime {current.value}")


def gausson_amplitude(k: float, lam: float, d: int, nu: float = 0.0) -> float:
    """Peak value e^{-nu/(2 lam)} e^{-d k/(4 lam)}."""
    if lam == 0.0:
        raise ValueError("Gaussons need lam != 0")
    return math.exp(-nu / (2.0 * lam) - d * k / (4.0 * lam))


def check_grid_adequacy(grid: Grid, k: float, center: float = 0.0) -> None:
    """
    Reject grids that truncate or under-resolve e^{-k |x - center|^2 / 2}.

    Raises:
        GridResolutionError: If e^{-k (L/2 - |center|)^2 / 2} >= 1e-12 or
            N / L < 4 sqrt(k)
    """
    half = grid.length / 2.0 - abs(center)
    if half <= 0 or math.exp(-k * half * half / 2.0) >= TRUNCATION_LIMIT:
        raise GridResolutionError(
            f"box L={grid.length} truncates a Gaussian of rate k={k:.6g} "
            f"centered at {center:.6g}"
        )
    if grid.points / grid.length < POINTS_PER_ROOT_K * math.sqrt(k):
        raise GridResolutionError(
            f"N/L={grid.points / grid.length:.4g} under-resolves rate k={k:.6g}; "
            f"need at least {POINTS_PER_ROOT_K * math.sqrt(k):.4g}"
        )


def gausson_field(
    spec: GaussonSpec, params: PhysParams, grid: Grid, check: bool = True
) -> WaveField:
    """
    Sample phi_{k,nu} on a grid.

    Args:
        spec: The Gausson to sample
        params: Equation parameters (lam and dim are used)
        grid: Target grid, of dimension params.dim
        check: Apply the grid adequacy rule first

    Returns:
        WaveField: Real, positive, radially decreasing samples
    """
    if grid.dim != params.dim:
        raise ValueError(f"grid dim {grid.dim} differs from params dim {params.dim}")
    if check:
        check_grid_adequacy(grid, spec.k)
    peak = gausson_amplitude(spec.k, params.lam, params.dim, spec.nu)
    values = peak * np.exp(-spec.k * grid.radius_squared() / 2.0)
    return WaveField(grid=grid, values=values)


def gausson_mass(k: float, lam: float, d: int, nu: float = 0.0) -> float:
    """
    Squared L2 norm e^{-nu/lam} e^{-d k/(2 lam)} (pi/k)^{d/2} of phi_{k,nu}.

    >>> round(gausson_mass(2 + math.sqrt(3), -2.0, 1), 5)
    2.33247
    """
    if k <= 0:
        raise ValueError(f"gausson_mass needs k > 0, got {k}")
    if lam == 0.0:
        raise ValueError("Gaussons need lam != 0")
    return math.exp(-nu / lam - d * k / (2.0 * lam)) * (math.pi / k) ** (d / 2.0)


def gausson_energy(k: float, lam: float, d: int, nu: float = 0.0) -> float:
    """
    Energy of phi_{k,nu}: E = -(lam + nu) * mass.

    Follows from I_nu(phi) = 0 and I_nu = 2 E + 2 (lam + nu) M.
    """
    return -(lam + nu) * gausson_mass(k, lam, d, nu)


def flat_limit_mass(lam: float, d: int) -> float:
    """Limit of mass(k_plus) as omega -> 0: e^d (pi / (-2 lam))^{d/2}."""
    if lam >= 0:
        raise ValueError("the flat limit exists for lam < 0 only")
    return math.e**d * (math.pi / (-2.0 * lam)) ** (d / 2.0)


def stationary_residual(
    phi: WaveField, params: PhysParams, nu: float = 0.0, reg: float = DEFAULT_REG
) -> float:
    """
    L2 norm of -1/2 Lap phi + V phi + lam phi ln|phi|^2 + nu phi.

    The Laplacian is spectral and V follows params.potential_sign.
    """
    grid = phi.grid
    values = phi.values
    laplacian = fft.ifftn(-grid.frequency_squared() * fft.fftn(values))
    rho = np.abs(values) ** 2
    local = params.potential_factor * grid.radius_squared() + params.lam * log_density(
        rho, reg
    )
    residual = -0.5 * laplacian + (local + nu) * values
    return float(np.sqrt(np.sum(np.abs(residual) ** 2) * grid.cell_volume))
