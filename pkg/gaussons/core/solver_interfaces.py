"""
Evolution interfaces for gaussons.

An evolver advances a WaveField in time under a fixed PhysParams. Step
observers subscribe to the stream of observable records an evolver produces
and perform side analyses (drift auditing, logging) without touching the
fields themselves.
"""

from abc import ABC, abstractmethod
from typing import Iterable, Optional

from gaussons.models.data_models import (
    EvolutionResult,
    ObservableRecord,
    PhysParams,
    SolverConfig,
    WaveField,
)


class IStepObserver(ABC):
    """
    Abstract interface for observers of an evolution.

    Observers are registered with a single evolve call and receive every
    recorded ObservableRecord in time order. They must not raise on
    ordinary data; anything they find worth reporting is kept in their own
    state and exposed through get_statistics.
    """

    @abstractmethod
    def on_record(self, record: ObservableRecord) -> None:
        """
        Receive one observable record.

        Args:
            record: Observables of the field at record.t
        """
        pass

    def on_run_start(self, params: PhysParams, config: SolverConfig) -> None:
        """Called once before the first record of a run."""
        pass

    def on_run_end(self, final_time: float) -> None:
        """Called once after the last record, also when the run aborted."""
        pass

    @abstractmethod
    def get_observer_name(self) -> str:
        """Name used in logs and reports."""
        pass

    def get_statistics(self) -> dict:
        return {"name": self.get_observer_name()}


class IEvolver(ABC):
    """
    Abstract interface for time integrators of the field equation.

    Implementations are bound to one PhysParams, one Grid and one
    SolverConfig at construction; step and evolve are then pure functions of
    the field passed in.

    Design Philosophy:
    - Fields are immutable values; step returns a new field
    - Failures that invalidate the result raise instead of returning garbage
    - Observables are recorded on a fixed stride so runs are reproducible
    """

    @abstractmethod
    def step(self, u: WaveField, t: Optional[float] = None) -> WaveField:
        """
        Advance the field by one time step.

        Args:
            u: Field on the evolver's grid
            t: Time of u; errors raised by the step carry t + dt

        Returns:
            WaveField: The field one step later
        """
        pass

    @abstractmethod
    def evolve(
        self,
        u0: WaveField,
        observers: Optional[Iterable[IStepObserver]] = None,
        t_end: Optional[float] = None,
    ) -> EvolutionResult:
        """
        Evolve from u0 up to t_end, recording observables and the final field.

        Args:
            u0: Initial field
            observers: Observers notified of every record
            t_end: Overrides the configured final time

        Returns:
            EvolutionResult: Observable series and final field, t = 0 included
        """
        pass

    def get_solver_name(self) -> str:
        return self.__class__.__name__

    def get_solver_metadata(self) -> dict:
        """
        Describe the solver for reports.

        Returns:
            dict: Solver name plus whatever settings the implementation adds
        """
        return {"name": self.get_solver_name()}
