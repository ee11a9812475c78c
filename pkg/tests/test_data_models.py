"""Tests for data models."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from gaussons.models.data_models import (
    Branch,
    ExperimentConfig,
    Grid,
    InvarianceDefect,
    NehariWitness,
    PhysParams,
    PlotSpec,
    PotentialSign,
    Regime,
    TauTrajectory,
    TrajectoryClass,
    TrajectoryKind,
    WaveField,
    regime_of,
)


class TestRegimeOf:
    """Tests for the regime classification of (lambda, omega)."""

    def test_two_gaussons(self):
        """Test that -lambda > omega > 0 has two Gaussons."""
        assert regime_of(-2.0, 1.0) == Regime.TWO_GAUSSONS

    def test_degenerate(self):
        """Test the degenerate line -lambda = omega."""
        assert regime_of(-2.0, 2.0) == Regime.DEGENERATE

    def test_degenerate_tolerance(self):
        """Test that a value read from text still lands on the degenerate line."""
        assert regime_of(-(1.0 + 1e-14), 1.0) == Regime.DEGENERATE

    def test_no_stationary(self):
        """Test omega > -lambda and lambda >= 0."""
        assert regime_of(-1.0, 2.0) == Regime.NO_STATIONARY
        assert regime_of(1.0, 1.0) == Regime.NO_STATIONARY
        assert regime_of(0.0, 1.0) == Regime.NO_STATIONARY

    def test_flat(self):
        """Test the flat Gausson without potential."""
        assert regime_of(-1.0, 0.0) == Regime.FLAT_GAUSSON
        assert regime_of(1.0, 0.0) == Regime.NO_STATIONARY


class TestPhysParams:
    """Tests for PhysParams."""

    def test_defaults(self):
        """Test default potential and dimension."""
        params = PhysParams(lam=-2.0)
        assert params.omega == 1.0
        assert params.dim == 1
        assert params.potential_sign == PotentialSign.REPULSIVE
        assert params.regime == Regime.TWO_GAUSSONS

    def test_potential_factor(self):
        """Test V(x) = factor |x|^2 for each sign."""
        assert PhysParams(lam=-1.0, omega=2.0).potential_factor == -2.0
        confining = PhysParams(
            lam=-1.0, omega=2.0, potential_sign=PotentialSign.CONFINING
        )
        assert confining.potential_factor == 2.0
        flat = PhysParams(lam=-1.0, omega=0.0, potential_sign=PotentialSign.NONE)
        assert flat.potential_factor == 0.0

    def test_negative_omega_rejected(self):
        """Test that omega must be non-negative."""
        with pytest.raises(ValidationError):
            PhysParams(lam=-1.0, omega=-1.0)

    def test_zero_dimension_rejected(self):
        """Test that the dimension is at least one."""
        with pytest.raises(ValidationError):
            PhysParams(lam=-1.0, dim=0)

    def test_none_potential_needs_zero_omega(self):
        """Test that 'none' with a nonzero omega is rejected."""
        with pytest.raises(ValidationError):
            PhysParams(lam=-1.0, omega=1.0, potential_sign=PotentialSign.NONE)

    def test_frozen(self):
        """Test that parameters cannot be changed after construction."""
        params = PhysParams(lam=-2.0)
        with pytest.raises(ValidationError):
            params.lam = 1.0


class TestGrid:
    """Tests for Grid."""

    def test_power_of_two_required(self):
        """Test that N must be a power of two."""
        with pytest.raises(ValidationError):
            Grid(length=10.0, points=100)

    def test_dimension_limit(self):
        """Test that grids are one- or two-dimensional."""
        with pytest.raises(ValidationError):
            Grid(length=10.0, points=16, dim=3)

    def test_axis(self):
        """Test that the axis starts at -L/2 with step L/N."""
        grid = Grid(length=8.0, points=16)
        axis = grid.axis()
        assert axis[0] == -4.0
        assert axis[-1] == pytest.approx(3.5)
        assert grid.dx == 0.5

    def test_two_dimensional_coordinates(self):
        """Test coordinate arrays of a 2D grid."""
        grid = Grid(length=8.0, points=16, dim=2)
        x, y = grid.coordinates()
        assert x.shape == (16, 16)
        assert np.all(x[:, 0] == grid.axis())
        assert np.all(y[0, :] == grid.axis())
        assert grid.cell_volume == 0.25

    def test_frequencies(self):
        """Test angular wavenumbers in FFT order."""
        grid = Grid(length=2.0 * math.pi, points=8)
        assert grid.frequencies().tolist() == pytest.approx(
            [0, 1, 2, 3, -4, -3, -2, -1]
        )


class TestWaveField:
    """Tests for WaveField."""

    def test_values_are_complex_and_read_only(self):
        """Test conversion and immutability of the samples."""
        grid = Grid(length=8.0, points=16)
        u = WaveField(grid=grid, values=np.ones(16))
        assert u.values.dtype == np.complex128
        with pytest.raises(ValueError):
            u.values[0] = 2.0

    def test_shape_mismatch(self):
        """Test that values must match the grid shape."""
        grid = Grid(length=8.0, points=16)
        with pytest.raises(ValidationError):
            WaveField(grid=grid, values=np.ones(8))

    def test_scaled_and_zeros(self):
        """Test helpers returning new fields."""
        grid = Grid(length=8.0, points=16)
        u = WaveField(grid=grid, values=np.ones(16))
        assert np.all(u.scaled(2j).values == 2j)
        assert np.all(WaveField.zeros(grid).values == 0)
        assert np.all(u.values == 1)


class TestTrajectoryModels:
    """Tests for trajectory verdicts and samples."""

    def test_periodic_needs_period(self):
        """Test that a periodic verdict carries a period."""
        with pytest.raises(ValidationError):
            TrajectoryClass(kind=TrajectoryKind.PERIODIC)
        assert TrajectoryClass(kind=TrajectoryKind.PERIODIC, period=1.5).period == 1.5

    def test_unbounded_needs_growth_rate(self):
        """Test that only unbounded verdicts carry a growth rate."""
        with pytest.raises(ValidationError):
            TrajectoryClass(kind=TrajectoryKind.STATIONARY, growth_rate=1.0)
        verdict = TrajectoryClass(kind=TrajectoryKind.UNBOUNDED, growth_rate=2.0)
        assert verdict.growth_rate == 2.0

    def test_relative_drift(self):
        """Test that drift is relative to max(1, |C(0)|)."""
        traj = TauTrajectory(
            t=np.array([0.0, 1.0]),
            tau=np.array([1.0, 1.0]),
            tau_dot=np.array([0.0, 0.0]),
            first_integral=np.array([-4.0, -4.0]),
            max_drift=2e-8,
        )
        assert traj.relative_drift == pytest.approx(5e-9)
        assert traj.final_state.tau == 1.0


class TestSmallModels:
    """Tests for witnesses, defects and plot specs."""

    def test_witness_center_dimension(self):
        """Test that the center has one component per dimension."""
        with pytest.raises(ValidationError):
            NehariWitness(eps=0.1, x0=(1.0,), d=2)
        w = NehariWitness(eps=0.1, x0=(3.0, 4.0), d=2)
        assert w.center_norm2 == 25.0

    def test_defect_passed(self):
        """Test the pass verdict of a commutation defect."""
        ok = InvarianceDefect(regime="r", transform="size", defect=1e-7, tolerance=1e-5)
        bad = InvarianceDefect(regime="r", transform="size", defect=1e-3, tolerance=1e-5)
        assert ok.passed
        assert not bad.passed

    def test_plot_kind(self):
        """Test that only line and orbit plots exist."""
        with pytest.raises(ValidationError):
            PlotSpec(kind="bar")
        assert PlotSpec(kind="orbits").x == "t"


class TestExperimentConfig:
    """Tests for ExperimentConfig."""

    def test_defaults(self):
        """Test the default parameter set."""
        cfg = ExperimentConfig()
        assert cfg.lam == -2.0
        assert cfg.omega == 1.0
        assert cfg.grid_N == 1024
        assert cfg.eps == [0.1, 0.01, 0.001]
        assert cfg.branch == Branch.PLUS

    def test_aliases(self):
        """Test file-style keys with dots and the word lambda."""
        cfg = ExperimentConfig.model_validate(
            {"lambda": "-1", "omega": "2", "grid.L": "30", "grid.N": "512"}
        )
        assert cfg.lam == -1.0
        assert cfg.grid(1) == Grid(length=30.0, points=512)
        assert cfg.phys_params().regime == Regime.NO_STATIONARY

    def test_unknown_key_rejected(self):
        """Test that typos are not silently ignored."""
        with pytest.raises(ValidationError):
            ExperimentConfig.model_validate({"omgea": "1"})

    def test_list_keys_from_text(self):
        """Test comma-separated lists."""
        cfg = ExperimentConfig.model_validate(
            {"eps": "0.5, 0.05", "tau_range": "0.5,2"}
        )
        assert cfg.eps == [0.5, 0.05]
        assert cfg.tau_range == [0.5, 2.0]

    def test_physical_keys_validated(self):
        """Test that PhysParams invariants are enforced at load time."""
        with pytest.raises(ValidationError):
            ExperimentConfig.model_validate({"potential": "none"})
        with pytest.raises(ValidationError):
            ExperimentConfig.model_validate({"grid.N": "1000"})

    def test_ranges_validated(self):
        """Test tau_range ordering and the fit window."""
        with pytest.raises(ValidationError):
            ExperimentConfig.model_validate({"tau_range": "2,1"})
        with pytest.raises(ValidationError):
            ExperimentConfig.model_validate({"fit_start": "10", "fit_end": "5"})

    def test_overrides(self):
        """Test phys_params and solver_config overrides."""
        cfg = ExperimentConfig()
        assert cfg.phys_params(dim=2).dim == 2
        assert cfg.solver_config(t_end=0.5).t_end == 0.5
        assert cfg.tensor_grid(2).shape == (256, 256)
