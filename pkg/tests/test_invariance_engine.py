"""Tests for the commutation checks."""

import math

import numpy as np
import pytest

from gaussons.impl.split_step import StrangSplittingSolver
from gaussons.impl.transforms import GalileanTransform
from gaussons.models.data_models import Grid, PhysParams, SolverConfig, WaveField
from gaussons.simulation.invariance_engine import (
    InvarianceContext,
    check_tensor,
    create_identity_transforms,
    default_transforms,
    gaussian_datum,
)

PARAMS = PhysParams(lam=-2.0, omega=1.0)
GRID = Grid(length=32.0, points=256)
CONFIG = SolverConfig(dt=5e-4, record_every=1000)
T = 0.5


class WrongSignGalilean(GalileanTransform):
    """Boost with the linear phase of the wrong sign."""

    def apply(self, u: WaveField, t: float) -> WaveField:
        boosted = super().apply(u, t)
        wt = self.omega * t
        flip = np.exp(-2j * math.cosh(wt) * self.v * u.grid.axis())
        return boosted.with_values(boosted.values * flip)


@pytest.fixture
def context():
    solver = StrangSplittingSolver(PARAMS, GRID, CONFIG)
    return InvarianceContext(gaussian_datum(GRID, 1.0), solver, t=T, label="two")


class TestInvarianceContext:
    """Tests for InvarianceContext."""

    def test_translation_and_galilean(self, context):
        """Test that the solver commutes with the moving invariances."""
        factories = default_transforms(v=0.05, x0=0.05)
        for name in ("translation", "galilean"):
            defect = context.check(factories[name](PARAMS))
            assert defect.transform == name
            assert defect.defect <= 1e-5
            assert defect.passed

    def test_size(self, context):
        """Test that the size gauge commutes up to rounding."""
        defect = context.check(default_transforms(c=1.5)["size"](PARAMS))
        assert defect.defect <= 1e-10

    def test_identity_defect_is_zero(self, context):
        """Test that identity members give an exactly zero defect."""
        for transform in create_identity_transforms(PARAMS):
            assert context.check(transform).defect == 0.0

    def test_wrong_sign_fails(self, context):
        """Test that a broken boost is caught."""
        defect = context.check(WrongSignGalilean(0.5, PARAMS.omega), name="broken")
        assert defect.defect > 1e-3
        assert not defect.passed
        assert defect.transform == "broken"

    def test_history_and_reset(self, context):
        """Test that defects accumulate until the datum changes."""
        context.check_many(create_identity_transforms(PARAMS))
        assert len(context.get_history()) == 3
        assert all(d.regime == "two" for d in context.get_history())
        context.reset_baseline(gaussian_datum(GRID, 2.0))
        assert context.get_history() == []

    def test_baseline_result(self, context):
        """Test that the baseline run keeps its observables and is evolved once."""
        result = context.baseline_result
        assert [r.t for r in result.observables] == pytest.approx([0.0, T])
        assert context.baseline is result.final
        assert context.baseline_result is result

    def test_negative_time(self):
        """Test that the comparison time is non-negative."""
        solver = StrangSplittingSolver(PARAMS, GRID, CONFIG)
        with pytest.raises(ValueError):
            InvarianceContext(gaussian_datum(GRID), solver, t=-1.0)


class TestTensor:
    """Tests for the tensorization check."""

    def test_product_of_solutions(self):
        """Test that the 2D solver evolves products factor by factor."""
        grid_1d = Grid(length=16.0, points=128)
        grid_2d = Grid(length=16.0, points=128, dim=2)
        config = SolverConfig(dt=1e-3, record_every=1000)
        solver_1d = StrangSplittingSolver(PARAMS, grid_1d, config)
        solver_2d = StrangSplittingSolver(
            PhysParams(lam=-2.0, omega=1.0, dim=2), grid_2d, config
        )
        factors = [gaussian_datum(grid_1d, 1.0), gaussian_datum(grid_1d, 2.0)]
        defect = check_tensor(factors, solver_1d, solver_2d, t=0.2, label="two")
        assert defect.transform == "tensor"
        assert defect.defect <= 1e-5
