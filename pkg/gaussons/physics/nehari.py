"""
Action, Nehari functional and the Gaussian witness family.

    S_nu(u) = E(u) + nu ||u||^2
    I_nu(u) = ||grad u||^2 + 2 int V |u|^2 + 2 lam int |u|^2 ln|u|^2 + 2 nu ||u||^2

so that I_nu = 2 S_nu + 2 lam ||u||^2. Every solitary-wave profile lies on
the Nehari manifold {I_nu = 0}.

The witnesses gamma(x) = eps exp(-|x - x0|^2 / 2) reach the Nehari manifold
for every small eps by moving x0 away from the origin, and their mass
eps^2 pi^{d/2} tends to zero. The infimum of the mass on the manifold is
therefore zero and no ground state exists. Witness values are computed in
closed form; grid quadrature is only used to cross-check them.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from gaussons.core.errors import RegimeError
from gaussons.models.data_models import (
    Grid,
    NehariWitness,
    PhysParams,
    PotentialSign,
    WaveField,
    WitnessRow,
)
from gaussons.physics import functionals as fn

logger = logging.getLogger(__name__)

WITNESS_MARGIN = 8.0
WITNESS_POINTS_PER_UNIT = 8.0


def action(
    u: WaveField, nu: float, params: PhysParams, reg: float = fn.DEFAULT_REG
) -> float:
    """S_nu(u) = E(u) + nu ||u||^2."""
    return fn.energy(u, params, reg) + nu * fn.mass(u)


def nehari(
    u: WaveField, nu: float, params: PhysParams, reg: float = fn.DEFAULT_REG
) -> float:
    """
    Nehari functional I_nu(u).

    With the repulsive potential the potential term is -omega^2 ||x u||^2.
    """
    value = fn.gradient_norm2(u) + 2.0 * fn.potential_energy(u, params)
    if params.lam:
        value += 2.0 * params.lam * fn.entropy(u, reg)
    return value + 2.0 * nu * fn.mass(u)


def witness_integrals(w: NehariWitness) -> Dict[str, float]:
    """
    Closed-form Gaussian integrals of a witness.

    Returns:
        dict: mass ||gamma||^2, gradient ||grad gamma||^2, moment ||x gamma||^2
            and entropy int gamma^2 ln gamma^2

    >>> vals = witness_integrals(NehariWitness(eps=1.0, x0=(0.0,)))
    >>> round(vals["gradient"] / vals["mass"], 12)
    0.5
    """
    base = w.eps**2 * math.pi ** (w.d / 2.0)
    gradient = base * w.d / 2.0
    return {
        "mass": base,
        "gradient": gradient,
        "moment": gradient + base * w.center_norm2,
        "entropy": math.log(w.eps**2) * base - gradient,
    }


def witness_nehari_closed(w: NehariWitness, params: PhysParams) -> float:
    """
    I_nu(gamma) from the closed-form integrals.

    For the repulsive potential this is
    eps^2 pi^{d/2} ((1 - 2 lam) d/2 - omega^2 d/2 - omega^2 |x0|^2 + 2 lam ln eps^2 + 2 nu).

    >>> w = NehariWitness(eps=1.0, x0=(0.0,))
    >>> round(witness_nehari_closed(w, PhysParams(lam=0.0, omega=0.0)), 6)
    0.886227
    """
    vals = witness_integrals(w)
    return (
        vals["gradient"]
        + 2.0 * params.potential_factor * vals["moment"]
        + 2.0 * params.lam * vals["entropy"]
        + 2.0 * w.nu * vals["mass"]
    )


def _bracket(eps: float, nu: float, params: PhysParams) -> float:
    d = params.dim
    lam, w2 = params.lam, params.omega**2
    kinetic = (1.0 - 2.0 * lam) * d / 2.0 - w2 * d / 2.0
    return 2.0 * lam * math.log(eps**2) + kinetic + 2.0 * nu


def solve_witness_x0(
    eps: float, nu: float, params: PhysParams
) -> Optional[Tuple[float, ...]]:
    """
    Center x0, on the first axis, putting gamma_{eps,x0} on the Nehari manifold.

    |x0|^2 = [2 lam ln eps^2 + (1 - 2 lam) d/2 - omega^2 d/2 + 2 nu] / omega^2.
    Returns None when the bracket is negative (eps too large).

    Raises:
        RegimeError: Unless lam < 0 < omega with the repulsive potential

    >>> round(solve_witness_x0(0.1, 0.0, PhysParams(lam=-2.0, omega=1.0))[0], 4)
    4.5189
    >>> solve_witness_x0(10.0, 0.0, PhysParams(lam=-2.0, omega=1.0)) is None
    True
    """
    if not (params.lam < 0 < params.omega) or (
        params.potential_sign != PotentialSign.REPULSIVE
    ):
        raise RegimeError(
            "witnesses need lam < 0 < omega and the repulsive potential, got "
            f"lam={params.lam}, omega={params.omega}, {params.potential_sign.value}"
        )
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    bracket = _bracket(eps, nu, params)
    if bracket < 0:
        return None
    return (math.sqrt(bracket) / params.omega,) + (0.0,) * (params.dim - 1)


def witness_grid(w: NehariWitness) -> Grid:
    """
    Grid resolving a witness: L = 2 |x0| + 16 and N the next power of two
    above 8 L.
    """
    if w.d > 2:
        raise ValueError("witness grids exist in one and two dimensions")
    length = 2.0 * math.sqrt(w.center_norm2) + 2.0 * WITNESS_MARGIN
    points = 1 << math.ceil(math.log2(WITNESS_POINTS_PER_UNIT * length))
    return Grid(length=length, points=points, dim=w.d)


def witness_field(w: NehariWitness, grid: Optional[Grid] = None) -> WaveField:
    """Sample gamma_{eps,x0} on a grid (witness_grid by default)."""
    grid = grid or witness_grid(w)
    if grid.dim != w.d:
        raise ValueError(f"grid dim {grid.dim} differs from witness dim {w.d}")
    r2 = sum((x - c) ** 2 for x, c in zip(grid.coordinates(), w.x0))
    return WaveField(grid=grid, values=w.eps * np.exp(-r2 / 2.0))


def _scan_row(
    eps: float, nu: float, params: PhysParams, quadrature: bool, reg: float
) -> Optional[WitnessRow]:
    x0 = solve_witness_x0(eps, nu, params)
    if x0 is None:
        return None
    w = NehariWitness(eps=eps, x0=x0, nu=nu, d=params.dim)
    residual = None
    if quadrature:
        residual = nehari(witness_field(w), nu, params, reg)
    return WitnessRow(
        eps=eps,
        x0=x0[0],
        mass=witness_integrals(w)["mass"],
        nehari_residual=residual,
    )


def delta_nu_scan(
    nu: float,
    params: PhysParams,
    eps_list: Iterable[float],
    *,
    quadrature: bool = False,
    reg: float = fn.DEFAULT_REG,
    workers: int = 1,
) -> List[WitnessRow]:
    """
    Nehari-manifold witnesses of shrinking mass.

    Args:
        nu: Frequency of the action
        params: Equation parameters with lam < 0 < omega
        eps_list: Amplitudes to try; inadmissible ones are skipped
        quadrature: Also evaluate I_nu on a grid as a cross-check
        reg: Log floor for the quadrature
        workers: Processes for the scan

    Returns:
        List[WitnessRow]: One row per admissible eps, in input order
    """
    eps_list = list(eps_list)
    job = partial(_scan_row, nu=nu, params=params, quadrature=quadrature, reg=reg)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(job, eps_list))
    else:
        rows = [job(eps) for eps in eps_list]
    skipped = [eps for eps, row in zip(eps_list, rows) if row is None]
    if skipped:
        logger.info(f"[delta_nu_scan] no witness center for eps={skipped}")
    return [row for row in rows if row is not None]
