"""Tests for ConservationAuditor."""

import pytest

from gaussons.impl.conservation_auditor import ConservationAuditor
from gaussons.impl.split_step import StrangSplittingSolver
from gaussons.models.data_models import (
    Branch,
    Grid,
    ObservableRecord,
    PhysParams,
    SolverConfig,
)
from gaussons.physics.gaussons import gausson_field, make_gausson

PARAMS = PhysParams(lam=-2.0, omega=1.0)


def record(t: float, mass: float = 1.0, energy: float = 2.0) -> ObservableRecord:
    return ObservableRecord(
        t=t,
        mass=mass,
        energy=energy,
        sigma_norm=1.0,
        xmean=0.0,
        variance=0.5,
        supnorm=1.0,
    )


@pytest.fixture
def auditor():
    a = ConservationAuditor()
    a.on_run_start(PARAMS, SolverConfig(dt=0.1))
    return a


class TestConservationAuditor:
    """Tests for ConservationAuditor."""

    def test_invalid_tolerances(self):
        """Test that tolerances must be positive."""
        with pytest.raises(ValueError):
            ConservationAuditor(mass_tolerance=0.0)
        with pytest.raises(ValueError):
            ConservationAuditor(max_flags=-1)

    def test_clean_run(self, auditor):
        """Test that constant observables pass."""
        for i in range(5):
            auditor.on_record(record(0.1 * i))
        auditor.on_run_end(0.4)
        assert auditor.passed
        assert auditor.flags == []
        assert auditor.final_time == 0.4

    def test_mass_drift_flagged(self, auditor):
        """Test that a mass jump is flagged and fails the run."""
        auditor.on_record(record(0.0))
        auditor.on_record(record(0.1, mass=1.0 + 1e-9))
        assert not auditor.passed
        assert auditor.flags[0].quantity == "mass"
        assert auditor.max_step_mass_drift == pytest.approx(1e-9)

    def test_per_step_normalisation(self, auditor):
        """Test that a jump between records is spread over the solver steps."""
        auditor.on_record(record(0.0))
        auditor.on_record(record(1.0, mass=1.0 + 1e-11))
        assert auditor.max_step_mass_drift == pytest.approx(1e-12)

    def test_step_mass_jump_flagged(self, auditor):
        """Test that a one-step mass jump inside the run tolerance fails the run."""
        auditor.on_record(record(0.0))
        auditor.on_record(record(0.1, mass=1.0 + 1e-11))
        assert auditor.max_mass_drift <= auditor.mass_tolerance
        assert [f.quantity for f in auditor.flags] == ["step_mass"]
        assert auditor.flags[0].relative_drift == pytest.approx(1e-11)
        assert not auditor.passed
        assert auditor.get_statistics()["passed"] is False

    def test_energy_floor(self, auditor):
        """Test that a zero initial energy is normalised by the floor."""
        auditor.on_record(record(0.0, energy=0.0))
        auditor.on_record(record(0.1, energy=1e-13))
        assert auditor.max_energy_drift == pytest.approx(0.1)
        assert auditor.flags[0].quantity == "energy"

    def test_max_flags(self):
        """Test that only max_flags flags are kept but all are counted."""
        a = ConservationAuditor(max_flags=1)
        a.on_run_start(PARAMS, SolverConfig(dt=0.1))
        a.on_record(record(0.0))
        for i in range(1, 4):
            a.on_record(record(0.1 * i, mass=2.0))
        assert len(a.flags) == 1
        assert a.total_flagged == 4
        a.clear_flags()
        assert a.flags == []
        assert a.total_flagged == 0

    def test_new_run_resets_maxima(self, auditor):
        """Test that drift maxima belong to the current run."""
        auditor.on_record(record(0.0))
        auditor.on_record(record(0.1, mass=2.0))
        auditor.on_run_start(PARAMS, SolverConfig(dt=0.1))
        assert auditor.max_mass_drift == 0.0
        assert auditor.total_runs == 2

    def test_statistics(self, auditor):
        """Test the statistics dictionary."""
        auditor.on_record(record(0.0))
        stats = auditor.get_statistics()
        assert stats["name"] == "ConservationAuditor"
        assert stats["total_records"] == 1
        assert stats["passed"] is True


class TestAuditedRun:
    """Tests with the split-step solver."""

    def test_gausson_run_passes(self):
        """Test that a Gausson evolution conserves mass and energy."""
        grid = Grid(length=40.0, points=1024)
        phi = gausson_field(make_gausson(PARAMS, Branch.PLUS), PARAMS, grid)
        solver = StrangSplittingSolver(
            PARAMS, grid, SolverConfig(dt=5e-4, t_end=0.25, record_every=50)
        )
        auditor = ConservationAuditor()
        solver.evolve(phi, observers=[auditor])
        assert auditor.passed
        assert auditor.total_records == 11
        assert auditor.final_time == pytest.approx(0.25)
