"""Tests for the Gausson closed forms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussons.core.errors import GridResolutionError, RegimeError
from gaussons.models.data_models import (
    Branch,
    GaussonSpec,
    Grid,
    PhysParams,
    PotentialSign,
)
from gaussons.physics import functionals as fn
from gaussons.physics.gaussons import (
    check_grid_adequacy,
    flat_limit_mass,
    gausson_amplitude,
    gausson_energy,
    gausson_field,
    gausson_k,
    gausson_mass,
    make_gausson,
    stationary_residual,
)

GRID = Grid(length=40.0, points=1024)
PARAMS = PhysParams(lam=-2.0, omega=1.0)


class TestGaussonRoots:
    """Tests for gausson_k."""

    def test_two_roots(self):
        """Test k = 2 -+ sqrt(3) for lambda = -2, omega = 1."""
        k_minus, k_plus = gausson_k(PARAMS)
        assert k_minus == pytest.approx(2.0 - math.sqrt(3.0), abs=1e-12)
        assert k_plus == pytest.approx(2.0 + math.sqrt(3.0), abs=1e-12)

    def test_degenerate(self):
        """Test the double root k = omega."""
        assert gausson_k(PhysParams(lam=-2.0, omega=2.0)) == (2.0, 2.0)

    def test_no_gausson(self):
        """Test that omega > -lambda has no root."""
        assert gausson_k(PhysParams(lam=-1.0, omega=2.0)) is None
        assert gausson_k(PhysParams(lam=1.0, omega=1.0)) is None

    def test_flat(self):
        """Test k = -2 lambda without potential."""
        params = PhysParams(lam=-1.5, omega=0.0, potential_sign=PotentialSign.NONE)
        assert gausson_k(params) == (0.0, 3.0)

    def test_confining(self):
        """Test the single root of k^2 + 2 lam k - omega^2 = 0."""
        params = PhysParams(
            lam=-1.0, omega=1.0, potential_sign=PotentialSign.CONFINING
        )
        k, _ = gausson_k(params)
        assert k == pytest.approx(1.0 + math.sqrt(2.0))
        assert k * k - 2.0 * k - 1.0 == pytest.approx(0.0, abs=1e-12)

    @given(
        lam=st.floats(min_value=-5.0, max_value=-0.1),
        ratio=st.floats(min_value=0.01, max_value=0.99),
    )
    def test_roots_solve_quadratic(self, lam, ratio):
        """Test that both roots solve k^2 + 2 lam k + omega^2 = 0."""
        omega = ratio * -lam
        for k in gausson_k(PhysParams(lam=lam, omega=omega)):
            assert k * k + 2.0 * lam * k + omega * omega == pytest.approx(
                0.0, abs=1e-10 * lam * lam
            )


class TestMakeGausson:
    """Tests for make_gausson."""

    def test_branches(self):
        """Test that each branch picks its root."""
        minus = make_gausson(PARAMS, Branch.MINUS)
        plus = make_gausson(PARAMS, Branch.PLUS)
        assert minus.k < plus.k
        assert minus.branch == Branch.MINUS

    def test_degenerate_branch(self):
        """Test that the degenerate regime returns its single Gausson."""
        spec = make_gausson(PhysParams(lam=-1.0, omega=1.0))
        assert spec.branch == Branch.DEGENERATE
        assert spec.k == 1.0

    def test_no_stationary_raises(self):
        """Test the regime error without Gaussons."""
        with pytest.raises(RegimeError):
            make_gausson(PhysParams(lam=-1.0, omega=2.0))

    def test_flat_minus_raises(self):
        """Test that the vanishing root is not a Gausson."""
        params = PhysParams(lam=-1.0, omega=0.0, potential_sign=PotentialSign.NONE)
        with pytest.raises(RegimeError):
            make_gausson(params, Branch.MINUS)
        assert make_gausson(params).k == 2.0

    def test_confined(self):
        """Test the confining contrast regime."""
        params = PhysParams(
            lam=-1.0, omega=1.0, potential_sign=PotentialSign.CONFINING
        )
        assert make_gausson(params).branch == Branch.CONFINED


class TestClosedForms:
    """Tests for amplitude, mass and energy."""

    def test_degenerate_amplitude(self):
        """Test the profile e^{1/4} e^{-x^2/2} at lambda = -1, omega = 1."""
        assert gausson_amplitude(1.0, -1.0, 1) == pytest.approx(math.exp(0.25))

    def test_flat_amplitude(self):
        """Test the amplitude e^{d/2} of the flat Gausson."""
        assert gausson_amplitude(4.0, -2.0, 2) == pytest.approx(math.e)

    def test_masses(self):
        """Test the closed-form masses of both Gaussons."""
        k_minus, k_plus = gausson_k(PARAMS)
        assert gausson_mass(k_plus, -2.0, 1) == pytest.approx(2.33247, abs=1e-5)
        assert gausson_mass(k_minus, -2.0, 1) == pytest.approx(3.66146, abs=1e-5)

    def test_mass_matches_quadrature(self):
        """Test the closed-form mass against the grid integral."""
        for branch in (Branch.MINUS, Branch.PLUS):
            spec = make_gausson(PARAMS, branch)
            phi = gausson_field(spec, PARAMS, GRID)
            assert fn.mass(phi) == pytest.approx(
                gausson_mass(spec.k, -2.0, 1), rel=1e-10
            )

    def test_energy_matches_quadrature(self):
        """Test E = -lambda M against the grid energy."""
        for branch in (Branch.MINUS, Branch.PLUS):
            spec = make_gausson(PARAMS, branch)
            phi = gausson_field(spec, PARAMS, GRID)
            assert fn.energy(phi, PARAMS) == pytest.approx(
                gausson_energy(spec.k, -2.0, 1), rel=1e-8
            )

    def test_frequency_shifts_mass(self):
        """Test that phi_{k,nu} = e^{-nu/(2 lam)} phi_k."""
        k = gausson_k(PARAMS)[1]
        ratio = gausson_mass(k, -2.0, 1, nu=1.0) / gausson_mass(k, -2.0, 1)
        assert ratio == pytest.approx(math.exp(0.5))

    @settings(max_examples=200)
    @given(
        lam=st.floats(min_value=-5.0, max_value=-0.1),
        ratio=st.floats(min_value=0.01, max_value=0.99),
        d=st.integers(min_value=1, max_value=3),
    )
    def test_mass_ordering(self, lam, ratio, d):
        """Test that the k_minus Gausson is heavier than the k_plus one."""
        k_minus, k_plus = gausson_k(PhysParams(lam=lam, omega=ratio * -lam))
        assert gausson_mass(k_minus, lam, d) > gausson_mass(k_plus, lam, d)

    def test_flat_limit(self):
        """Test the omega -> 0 trends of both masses."""
        lam = -2.0
        limit = flat_limit_mass(lam, 1)
        plus, minus = [], []
        for omega in (0.5, 0.1, 0.01):
            k_minus, k_plus = gausson_k(PhysParams(lam=lam, omega=omega))
            plus.append(gausson_mass(k_plus, lam, 1))
            minus.append(gausson_mass(k_minus, lam, 1))
        gaps = [abs(m - limit) for m in plus]
        assert gaps == sorted(gaps, reverse=True)
        assert plus[-1] == pytest.approx(limit, rel=0.01)
        assert minus == sorted(minus)

    def test_invalid_arguments(self):
        """Test closed forms outside their domain."""
        with pytest.raises(ValueError):
            gausson_mass(0.0, -1.0, 1)
        with pytest.raises(ValueError):
            gausson_amplitude(1.0, 0.0, 1)
        with pytest.raises(ValueError):
            flat_limit_mass(1.0, 1)


class TestGaussonField:
    """Tests for sampled Gaussons and their residual."""

    def test_stationary_residual(self):
        """Test that both Gaussons solve the stationary equation on the grid."""
        for branch in (Branch.MINUS, Branch.PLUS):
            phi = gausson_field(make_gausson(PARAMS, branch), PARAMS, GRID)
            residual = stationary_residual(phi, PARAMS)
            assert residual <= 1e-6 * math.sqrt(fn.mass(phi))

    def test_residual_with_frequency(self):
        """Test phi_{k,nu} against the equation with the nu term."""
        spec = make_gausson(PARAMS, Branch.PLUS, nu=0.7)
        phi = gausson_field(spec, PARAMS, GRID)
        assert stationary_residual(phi, PARAMS, nu=0.7) <= 1e-6 * math.sqrt(
            fn.mass(phi)
        )
        assert stationary_residual(phi, PARAMS, nu=0.0) > 1e-2

    def test_two_dimensional_peak(self):
        """Test the peak of a 2D Gausson."""
        params = PhysParams(lam=-2.0, omega=1.0, dim=2)
        grid = Grid(length=16.0, points=128, dim=2)
        spec = make_gausson(params, Branch.PLUS)
        phi = gausson_field(spec, params, grid)
        assert np.max(np.abs(phi.values)) == pytest.approx(
            gausson_amplitude(spec.k, -2.0, 2)
        )

    def test_grid_dimension_mismatch(self):
        """Test that the grid must match the parameters' dimension."""
        spec = make_gausson(PARAMS)
        with pytest.raises(ValueError):
            gausson_field(spec, PARAMS, Grid(length=20.0, points=64, dim=2))

    def test_truncating_box(self):
        """Test the truncation rule."""
        with pytest.raises(GridResolutionError):
            check_grid_adequacy(Grid(length=4.0, points=1024), k=0.27)

    def test_under_resolved_grid(self):
        """Test the resolution rule."""
        with pytest.raises(GridResolutionError):
            check_grid_adequacy(Grid(length=40.0, points=64), k=3.7)

    def test_unchecked_field(self):
        """Test that check=False samples anyway."""
        spec = GaussonSpec(k=3.7)
        phi = gausson_field(spec, PARAMS, Grid(length=40.0, points=64), check=False)
        assert phi.values.shape == (64,)
