"""
Strang split-step evolution of the logarithmic Schrodinger equation.

One step is a half kinetic flow in Fourier space, a full local flow, and
another half kinetic flow. The local flow multiplies pointwise by
exp(-i dt W) with W = V(x) + lam ln(|u|^2 + reg max|u|^2); it is exact
because |u| does not change under it. The quadratic potential lives in the
local flow, so the only splitting error is the kinetic/local commutator.
When dt exceeds the potential-phase heuristic each step is taken as equal
substeps below it, so records still fall on multiples of dt.
"""

import logging
import math
from typing import Iterable, List, Optional

import numpy as np
from scipy import fft

from gaussons.core.errors import BoundaryLeak
from gaussons.core.solver_interfaces import IEvolver, IStepObserver
from gaussons.models.data_models import (
    EvolutionResult,
    Grid,
    ObservableRecord,
    PhysParams,
    SolverConfig,
    WaveField,
)
from gaussons.physics import functionals as fn

logger = logging.getLogger(__name__)

BOUNDARY_BAND = 0.4  # |x_i| > 0.4 L is the outer 10% of the box on each side


def dt_heuristic(params: PhysParams, grid: Grid) -> float:
    """Largest dt keeping the potential phase per step below 0.1 rad."""
    return 0.1 / max(1.0, params.omega**2 * grid.length**2 / 8.0)


def substep_count(dt: float, limit: float) -> int:
    """
    Equal substeps of dt that each stay within limit.

    >>> substep_count(1e-3, 1.25e-4), substep_count(5e-4, 5e-4)
    (8, 1)
    """
    return max(1, math.ceil(dt / limit * (1.0 - 1e-12)))


class StrangSplittingSolver(IEvolver):
    """
    Spectral Strang splitting on a periodic 1D or 2D grid.

    Works on any grid of the solver's dimension; 2D runs are meant for
    tensor-product data.
    """

    def __init__(
        self,
        params: PhysParams,
        grid: Grid,
        config: Optional[SolverConfig] = None,
        workers: Optional[int] = None,
    ):
        """
        Initialize the solver.

        Args:
            params: Equation parameters
            grid: Grid every field must live on
            config: Step, horizon, log floor and boundary guard
            workers: Threads handed to scipy.fft (None for its default)
        """
        if grid.dim != params.dim:
            raise ValueError(
                f"grid dim {grid.dim} does not match params dim {params.dim}"
            )
        self.params = params
        self.grid = grid
        self.config = config or SolverConfig()
        self.workers = workers

        dt = self.config.dt
        limit = dt_heuristic(params, grid)
        self.substeps = 1
        if dt > limit:
            if self.config.substep:
                self.substeps = substep_count(dt, limit)
                logger.info(
                    f"[StrangSplittingSolver] dt={dt:.3g} exceeds the potential-phase "
                    f"heuristic {limit:.3g}; taking {self.substeps} substeps per step"
                )
            else:
                logger.warning(
                    f"[StrangSplittingSolver] dt={dt:.3g} exceeds the potential-phase "
                    f"heuristic {limit:.3g}; expect degraded accuracy near the box edge"
                )
        self._h = dt / self.substeps

        self._half_kinetic = np.exp(-0.25j * self._h * grid.frequency_squared())
        self._potential = params.potential_factor * grid.radius_squared()
        coords = grid.coordinates()
        band = np.zeros(grid.shape, dtype=bool)
        for x in coords:
            band |= np.abs(x) > BOUNDARY_BAND * grid.length
        self._band = band

    def _kinetic(self, values: np.ndarray) -> np.ndarray:
        return fft.ifftn(
            fft.fftn(values, workers=self.workers) * self._half_kinetic,
            workers=self.workers,
        )

    def _substep(self, values: np.ndarray) -> np.ndarray:
        values = self._kinetic(values)
        rho = np.abs(values) ** 2
        w = self._potential
        if self.params.lam != 0.0:
            w = w + self.params.lam * fn.log_density(rho, self.config.reg)
        values = values * np.exp(-1j * self._h * w)
        return self._kinetic(values)

    def _advance(self, values: np.ndarray) -> np.ndarray:
        for _ in range(self.substeps):
            values = self._substep(values)
        return values

    def boundary_fraction(self, values: np.ndarray) -> float:
        """Share of the mass in the outer band of the box."""
        rho = np.abs(values) ** 2
        total = float(rho.sum())
        if total == 0.0:
            return 0.0
        return float(rho[self._band].sum()) / total

    def _guard(self, values: np.ndarray, t: float) -> None:
        fraction = self.boundary_fraction(values)
        if fraction > self.config.boundary_mass_limit:
            raise BoundaryLeak(
                f"[StrangSplittingSolver] boundary mass fraction {fraction:.3e} "
                f"exceeds {self.config.boundary_mass_limit:.1e} at t={t:.6g}",
                time=t,
                fraction=fraction,
            )

    def _check_field(self, u: WaveField) -> None:
        if u.grid != self.grid:
            raise ValueError(f"field grid {u.grid} differs from solver grid {self.grid}")

    def step(self, u: WaveField, t: Optional[float] = None) -> WaveField:
        """
        Advance u by one dt.

        Args:
            u: Field at time t
            t: Time of u, used to date a boundary leak (0 when omitted)
        """
        self._check_field(u)
        values = self._advance(u.values)
        self._guard(values, (t or 0.0) + self.config.dt)
        return u.with_values(values)

    def observe(self, u: WaveField, t: float) -> ObservableRecord:
        """Observables of a field at time t."""
        return ObservableRecord(
            t=t,
            mass=fn.mass(u),
            energy=fn.energy(u, self.params, self.config.reg),
            sigma_norm=fn.sigma_norm(u),
            xmean=fn.center_of_mass(u),
            variance=fn.variance(u),
            supnorm=fn.supnorm(u),
        )

    def evolve(
        self,
        u0: WaveField,
        observers: Optional[Iterable[IStepObserver]] = None,
        t_end: Optional[float] = None,
    ) -> EvolutionResult:
        """
        Step from u0 to t_end, recording every record_every steps.

        The number of steps is round(t_end / dt); t_end is expected to be a
        multiple of dt.

        Raises:
            BoundaryLeak: With the time of the first step that leaked
        """
        self._check_field(u0)
        t_end = self.config.t_end if t_end is None else t_end
        dt = self.config.dt
        n_steps = int(round(t_end / dt))
        if n_steps > 0 and not math.isclose(n_steps * dt, t_end, rel_tol=1e-9):
            logger.warning(
                f"[StrangSplittingSolver] t_end={t_end} is not a multiple of "
                f"dt={dt}; stopping at {n_steps * dt}"
            )
        active: List[IStepObserver] = list(observers or [])
        for observer in active:
            observer.on_run_start(self.params, self.config)

        result = EvolutionResult()
        self._record(result, u0, 0.0, active)
        values = u0.values
        t = 0.0
        try:
            for i in range(1, n_steps + 1):
                values = self._advance(values)
                t = i * dt
                self._guard(values, t)
                if i % self.config.record_every == 0 or i == n_steps:
                    self._record(result, u0.with_values(values), t, active)
        finally:
            for observer in active:
                observer.on_run_end(t)
        result.final_field = u0.with_values(values) if n_steps > 0 else u0
        logger.debug(
            f"[StrangSplittingSolver] evolved {n_steps} steps to t={t:.6g}"
        )
        return result

    def _record(
        self,
        result: EvolutionResult,
        u: WaveField,
        t: float,
        observers: List[IStepObserver],
    ) -> None:
        record = self.observe(u, t)
        if self.config.keep_snapshots:
            result.snapshots.append((t, u))
        result.observables.append(record)
        for observer in observers:
            observer.on_record(record)

    def get_solver_metadata(self) -> dict:
        return {
            "name": self.get_solver_name(),
            "dt": self.config.dt,
            "reg": self.config.reg,
            "grid_length": self.grid.length,
            "grid_points": self.grid.points,
            "dim": self.grid.dim,
            "dt_heuristic": dt_heuristic(self.params, self.grid),
            "substeps": self.substeps,
        }
