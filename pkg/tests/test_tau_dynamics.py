"""Tests for the Gaussian-ansatz tau dynamics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussons.core.errors import (
    InconclusiveClassification,
    StepRejected,
    WidthCollapse,
)
from gaussons.models.data_models import (
    Branch,
    ExperimentConfig,
    FixedPointKind,
    GaussianAnsatz,
    Grid,
    PhysParams,
    TauState,
    TrajectoryKind,
)
from gaussons.physics.gaussons import gausson_amplitude, gausson_field, make_gausson
from gaussons.physics.tau_dynamics import (
    ansatz_to_field,
    classify_many,
    classify_trajectory,
    evolve_ansatz,
    first_integral,
    fixed_points,
    integrate_tau,
    phase_portrait,
    stationary_taus,
    tau_rhs,
    tau_rhs_factored,
)

TWO = PhysParams(lam=-2.0, omega=1.0)
DEGENERATE = PhysParams(lam=-2.0, omega=2.0)
NONE = PhysParams(lam=-1.0, omega=2.0)


class TestRightHandSide:
    """Tests for the tau acceleration and its first integral."""

    @settings(max_examples=1000, deadline=None)
    @given(
        tau=st.floats(min_value=0.1, max_value=10.0),
        lam=st.floats(min_value=-5.0, max_value=5.0),
        omega=st.floats(min_value=0.0, max_value=3.0),
    )
    def test_factored_form_agrees(self, tau, lam, omega):
        """Test 2 lam/tau + 1/tau^3 + omega^2 tau = P(1/tau^2) tau."""
        s = TauState(tau=tau)
        params = PhysParams(lam=lam, omega=omega)
        scale = abs(2.0 * lam / tau) + tau**-3 + omega**2 * tau
        assert abs(tau_rhs_factored(s, params) - tau_rhs(s, params)) <= 1e-12 * scale

    def test_rhs_vanishes_at_stationary_widths(self):
        """Test that stationary widths are zeros of the acceleration."""
        for tau in stationary_taus(TWO):
            assert tau_rhs(TauState(tau=tau), TWO) == pytest.approx(0.0, abs=1e-12)

    def test_nonpositive_tau_rejected(self):
        """Test that tau must be positive."""
        with pytest.raises(ValueError):
            first_integral(TauState.model_construct(tau=0.0, tau_dot=0.0), TWO)


class TestIntegrateTau:
    """Tests for the fixed-step integrator."""

    def test_first_integral_conserved(self):
        """Test relative drift below 1e-8 on a periodic orbit."""
        traj = integrate_tau(TauState(tau=0.6), TWO, t_end=20.0, dt=5e-4)
        assert traj.relative_drift <= 1e-8
        assert traj.t[-1] == pytest.approx(20.0)

    def test_record_every(self):
        """Test decimated samples keep the last step."""
        traj = integrate_tau(TauState(tau=0.6), TWO, t_end=1.0, dt=0.01, record_every=7)
        assert traj.t[-1] == pytest.approx(1.0)
        assert len(traj.t) == 1 + 100 // 7 + 1

    def test_tau_max_stops_early(self):
        """Test that escaping orbits stop past tau_max."""
        traj = integrate_tau(TauState(tau=1.0), NONE, t_end=20.0, dt=1e-3, tau_max=5.0)
        assert traj.tau[-1] > 5.0
        assert traj.t[-1] < 20.0

    def test_width_collapse(self):
        """Test that a stage predicting tau <= 0 raises."""
        with pytest.raises(WidthCollapse):
            integrate_tau(TauState(tau=0.1, tau_dot=-100.0), TWO, t_end=1.0, dt=0.01)

    def test_step_rejected(self):
        """Test that a coarse step trips the first-integral gate."""
        with pytest.raises(StepRejected) as info:
            integrate_tau(TauState(tau=1.0), TWO, t_end=1.0, dt=0.5)
        assert info.value.drift > 1e-6

    def test_invalid_dt(self):
        """Test that dt must be positive."""
        with pytest.raises(ValueError):
            integrate_tau(TauState(tau=1.0), TWO, t_end=1.0, dt=0.0)


class TestFixedPoints:
    """Tests for stationary widths and their linear type."""

    def test_two_gaussons(self):
        """Test a center at the narrow Gausson and a saddle at the wide one."""
        points = fixed_points(TWO)
        assert [p.kind for p in points] == [FixedPointKind.CENTER, FixedPointKind.SADDLE]
        assert points[0].tau == pytest.approx(0.51764, abs=1e-5)
        assert points[1].tau == pytest.approx(1.93185, abs=1e-5)
        assert points[1].omega_eff == pytest.approx(8.0 * math.sqrt(3.0) - 12.0)

    def test_degenerate(self):
        """Test the single degenerate point tau = 1/sqrt(omega)."""
        points = fixed_points(DEGENERATE)
        assert len(points) == 1
        assert points[0].kind == FixedPointKind.DEGENERATE
        assert points[0].tau == pytest.approx(1.0 / math.sqrt(2.0))

    def test_none(self):
        """Test that no fixed point exists when omega > -lambda."""
        assert fixed_points(NONE) == []


class TestClassifyTrajectory:
    """Tests for trajectory verdicts."""

    def test_stationary(self):
        """Test a start on a fixed point."""
        tau = stationary_taus(TWO)[0]
        verdict = classify_trajectory(TauState(tau=tau), TWO)
        assert verdict.kind == TrajectoryKind.STATIONARY

    def test_periodic(self):
        """Test a closed orbit around the center."""
        verdict = classify_trajectory(TauState(tau=0.6), TWO)
        assert verdict.kind == TrajectoryKind.PERIODIC
        assert 1.0 < verdict.period < 1.6

    def test_unbounded(self):
        """Test exponential growth at rate omega without fixed points."""
        verdict = classify_trajectory(TauState(tau=1.0), NONE)
        assert verdict.kind == TrajectoryKind.UNBOUNDED
        assert verdict.growth_rate == pytest.approx(2.0, rel=0.02)

    def test_inconclusive(self):
        """Test that a short horizon gives no verdict."""
        with pytest.raises(InconclusiveClassification):
            classify_trajectory(TauState(tau=0.6), TWO, horizon=1e-3)

    def test_classify_many(self):
        """Test classification of several states in one call."""
        results = classify_many([(0.6, 0.0), (1.0, 0.0)], NONE)
        assert [r[2].kind for r in results] == [TrajectoryKind.UNBOUNDED] * 2

    @pytest.mark.slow
    @pytest.mark.parametrize(
        "params", [TWO, DEGENERATE, NONE], ids=["two", "degenerate", "none"]
    )
    def test_default_grid(self, params):
        """Test that every start of the default 10 x 10 grid gets a verdict."""
        cfg = ExperimentConfig()
        states = [
            (float(tau), float(v))
            for tau in np.linspace(*cfg.tau_range, cfg.n_tau)
            for v in np.linspace(-cfg.taudot_max, cfg.taudot_max, cfg.n_taudot)
        ]
        verdicts = [verdict for _, _, verdict in classify_many(states, params)]
        assert len(verdicts) == 100
        assert None not in verdicts
        periodic = sum(v.kind == TrajectoryKind.PERIODIC for v in verdicts)
        if params is TWO:
            assert periodic > 0
        else:
            assert periodic == 0
            assert all(v.kind == TrajectoryKind.UNBOUNDED for v in verdicts)


class TestPhasePortrait:
    """Tests for phase portraits."""

    def test_orbit_count(self):
        """Test that off-axis seeds are integrated both ways."""
        portrait = phase_portrait(TWO, n_orbits=4, t_end=5.0)
        assert len(portrait.orbits) == 6
        assert len(portrait.fixed_points) == 2
        assert any(orbit.t[-1] < 0 for orbit in portrait.orbits)

    def test_invalid_range(self):
        """Test that tau ranges must be positive."""
        with pytest.raises(ValueError):
            phase_portrait(TWO, tau_range=(0.0, 1.0))


class TestGaussianAnsatz:
    """Tests for the joint (tau, tau_dot, theta) evolution."""

    def _gausson_ansatz(self):
        spec = make_gausson(TWO, Branch.PLUS)
        tau = 1.0 / math.sqrt(spec.k)
        return spec, GaussianAnsatz(
            state=TauState(tau=tau),
            b0_mod=gausson_amplitude(spec.k, TWO.lam, 1),
            tau0=tau,
        )

    def test_gausson_is_stationary(self):
        """Test that the Gausson keeps its width and phase."""
        _, g = self._gausson_ansatz()
        final = evolve_ansatz(g, TWO, t_end=1.0, dt=1e-3)[-1][1]
        assert final.state.tau == pytest.approx(g.state.tau, abs=1e-9)
        assert final.theta == pytest.approx(0.0, abs=1e-9)

    def test_field_matches_gausson(self):
        """Test that the sampled ansatz is the Gausson profile."""
        spec, g = self._gausson_ansatz()
        grid = Grid(length=40.0, points=1024)
        sampled = ansatz_to_field(g, grid)
        np.testing.assert_allclose(
            sampled.values, gausson_field(spec, TWO, grid).values, atol=1e-12
        )

    def test_two_dimensional_rejected(self):
        """Test that the ansatz lives in one dimension."""
        _, g = self._gausson_ansatz()
        with pytest.raises(ValueError):
            evolve_ansatz(g, PhysParams(lam=-2.0, omega=1.0, dim=2), t_end=1.0)
