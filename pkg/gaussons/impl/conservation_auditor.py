"""
Conservation auditor for split-step runs.

Mass and energy are conserved by the equation. The auditor watches the
observable stream of an evolution and flags records whose mass or energy has
drifted from the first record by more than a relative tolerance. A record
is also flagged when its mass jump from the previous record, spread over the
solver steps between them, exceeds the per-step tolerance. It never
interrupts the run; experiments read its verdict afterwards.
"""

import logging
from typing import List, Optional

from gaussons.core.solver_interfaces import IStepObserver
from gaussons.models.data_models import (
    DriftFlag,
    ObservableRecord,
    PhysParams,
    SolverConfig,
)

logger = logging.getLogger(__name__)


class ConservationAuditor(IStepObserver):
    """
    Step observer that audits mass and energy drift.

    Drifts are measured relative to the first record of a run:
    |M(t) - M(0)| / M(0) and |E(t) - E(0)| / max(|E(0)|, energy_floor).
    The per-step mass drift divides each jump between consecutive records by
    the number of solver steps separating them.

    Configuration:
    - mass_tolerance: Largest relative mass drift over the run (default 1e-10)
    - energy_tolerance: Largest relative energy drift over the run (default 1e-6)
    - step_mass_tolerance: Largest relative mass drift per step (default 1e-12)
    - max_flags: Flags kept before further ones are only counted
    """

    def __init__(
        self,
        mass_tolerance: float = 1e-10,
        energy_tolerance: float = 1e-6,
        step_mass_tolerance: float = 1e-12,
        energy_floor: float = 1e-12,
        max_flags: int = 100,
    ):
        """
        Initialize the auditor.

        Args:
            mass_tolerance: Relative mass drift tolerated over a run
            energy_tolerance: Relative energy drift tolerated over a run
            step_mass_tolerance: Relative mass drift tolerated per solver step
            energy_floor: Lower bound of the energy normalisation
            max_flags: Largest number of DriftFlag entries retained
        """
        for name, value in (
            ("mass_tolerance", mass_tolerance),
            ("energy_tolerance", energy_tolerance),
            ("step_mass_tolerance", step_mass_tolerance),
            ("energy_floor", energy_floor),
        ):
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if max_flags < 0:
            raise ValueError("max_flags must be non-negative")

        self.mass_tolerance = mass_tolerance
        self.energy_tolerance = energy_tolerance
        self.step_mass_tolerance = step_mass_tolerance
        self.energy_floor = energy_floor
        self.max_flags = max_flags

        self.flags: List[DriftFlag] = []
        self.total_runs = 0
        self.total_records = 0
        self.total_flagged = 0
        self._reset_run()

    def _reset_run(self) -> None:
        self._dt: Optional[float] = None
        self._first: Optional[ObservableRecord] = None
        self._previous: Optional[ObservableRecord] = None
        self.max_mass_drift = 0.0
        self.max_energy_drift = 0.0
        self.max_step_mass_drift = 0.0
        self.final_time = 0.0

    def on_run_start(self, params: PhysParams, config: SolverConfig) -> None:
        self._reset_run()
        self._dt = config.dt
        self.total_runs += 1
        logger.debug(
            f"[ConservationAuditor] run {self.total_runs} started "
            f"(lam={params.lam}, omega={params.omega}, dt={config.dt})"
        )

    def on_record(self, record: ObservableRecord) -> None:
        self.total_records += 1
        if self._first is None:
            self._first = self._previous = record
            return

        first, previous = self._first, self._previous
        mass_scale = first.mass if first.mass > 0 else 1.0
        mass_drift = abs(record.mass - first.mass) / mass_scale
        energy_drift = abs(record.energy - first.energy) / max(
            abs(first.energy), self.energy_floor
        )
        self.max_mass_drift = max(self.max_mass_drift, mass_drift)
        self.max_energy_drift = max(self.max_energy_drift, energy_drift)

        jump = 0.0
        if self._dt:
            steps = max(1, int(round((record.t - previous.t) / self._dt)))
            jump = abs(record.mass - previous.mass) / mass_scale / steps
            self.max_step_mass_drift = max(self.max_step_mass_drift, jump)
        self._previous = record

        if mass_drift > self.mass_tolerance:
            self._flag(record.t, "mass", mass_drift, self.mass_tolerance)
        if energy_drift > self.energy_tolerance:
            self._flag(record.t, "energy", energy_drift, self.energy_tolerance)
        if jump > self.step_mass_tolerance:
            self._flag(record.t, "step_mass", jump, self.step_mass_tolerance)

    def _flag(self, t: float, quantity: str, drift: float, tolerance: float) -> None:
        self.total_flagged += 1
        if len(self.flags) < self.max_flags:
            self.flags.append(
                DriftFlag(t=t, quantity=quantity, relative_drift=drift, tolerance=tolerance)
            )
        if self.total_flagged == 1:
            logger.warning(
                f"[ConservationAuditor] {quantity} drift {drift:.3e} exceeds "
                f"{tolerance:.1e} at t={t:.6g}"
            )

    def on_run_end(self, final_time: float) -> None:
        self.final_time = final_time
        logger.info(
            f"[ConservationAuditor] run ended at t={final_time:.6g}: "
            f"mass drift {self.max_mass_drift:.3e}, "
            f"energy drift {self.max_energy_drift:.3e}, "
            f"{self.total_flagged} flagged"
        )

    @property
    def passed(self) -> bool:
        """True when no record of the current run was flagged."""
        return (
            self.max_mass_drift <= self.mass_tolerance
            and self.max_energy_drift <= self.energy_tolerance
            and self.max_step_mass_drift <= self.step_mass_tolerance
        )

    def get_observer_name(self) -> str:
        return "ConservationAuditor"

    def get_statistics(self) -> dict:
        """
        Summary of the current run and the auditor's lifetime counters.

        Returns:
            dict: Drift maxima, tolerances, counters and the pass verdict
        """
        return {
            "name": self.get_observer_name(),
            "passed": self.passed,
            "max_mass_drift": self.max_mass_drift,
            "max_energy_drift": self.max_energy_drift,
            "max_step_mass_drift": self.max_step_mass_drift,
            "mass_tolerance": self.mass_tolerance,
            "energy_tolerance": self.energy_tolerance,
            "step_mass_tolerance": self.step_mass_tolerance,
            "final_time": self.final_time,
            "total_runs": self.total_runs,
            "total_records": self.total_records,
            "total_flagged": self.total_flagged,
        }

    def clear_flags(self) -> None:
        self.flags.clear()
        self.total_flagged = 0
