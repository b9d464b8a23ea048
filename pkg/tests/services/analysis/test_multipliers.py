"""
Test Bump Profile and Multipliers
"""
from fractions import Fraction

import numpy as np
import pytest

from src.models.grid import Grid, GridError
from src.services.analysis.bump import BumpProfile, build_phi_hat
from src.services.analysis.multipliers import (
    SingularMultiplierError,
    constant_one,
    get_multiplier,
    halfspace_sign,
    riesz,
)


class TestBumpProfile:
    def test_flat_top_and_support(self):
        profile = BumpProfile()

        np.testing.assert_allclose(profile.evaluate_1d([0.0, 0.05, -0.09]), [1.0, 1.0, 1.0])
        np.testing.assert_allclose(profile.evaluate_1d([0.1, 0.2, -0.5]), [0.0, 0.0, 0.0])

    def test_transition_is_monotone_and_even(self):
        profile = BumpProfile()
        t = np.linspace(0.09, 0.1, 50)
        values = profile.evaluate_1d(t)

        assert np.all(np.diff(values) <= 0)
        assert np.all((values >= 0) & (values <= 1))
        np.testing.assert_allclose(profile.evaluate_1d(-t), values)

    def test_radii_validated(self):
        with pytest.raises(ValueError, match="need 0 < inner < outer"):
            BumpProfile(inner=Fraction(1, 5), outer=Fraction(1, 10))

    def test_l2_norm_between_radii(self):
        """∫φ̂² lies between 2·inner and 2·outer"""
        assert 0.18 < BumpProfile().l2_norm_sq_1d() < 0.2


class TestBuildPhiHat:
    def test_sampled_on_frequency_grid(self, grid_2d):
        phi_hat = build_phi_hat(BumpProfile(), grid_2d)

        assert phi_hat.domain == "frequency"
        assert phi_hat.samples.shape == grid_2d.shape
        assert phi_hat.abs().max() == pytest.approx(1.0)

    def test_span_must_contain_support(self):
        with pytest.raises(GridError, match="must exceed the bump radius"):
            build_phi_hat(BumpProfile(), Grid(1, 6, 3))


class TestMultipliers:
    def test_riesz(self):
        values = riesz(1)(np.array([[3.0, 4.0], [0.0, 2.0]]))

        np.testing.assert_allclose(values, [0.6, 0.0])

    def test_homogeneous_degree_zero(self):
        xi = np.array([[0.3, -0.7]])
        m = riesz(2)

        np.testing.assert_allclose(m(xi), m(5 * xi))

    def test_origin_requires_convention(self):
        with pytest.raises(SingularMultiplierError, match="riesz_1 evaluated at ξ = 0"):
            riesz(1)(np.zeros((1, 2)))

        np.testing.assert_allclose(riesz(1)(np.zeros((1, 2)), origin_value=0.0), [0.0])

    def test_constant_one(self):
        m = constant_one()

        assert m.origin == 1.0
        np.testing.assert_allclose(m(np.array([[1.0, 2.0], [0.0, 0.0]]), origin_value=m.origin), [1.0, 1.0])

    def test_halfspace_sign(self):
        values = halfspace_sign()(np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]]))

        np.testing.assert_allclose(values, [1.0, -1.0, 0.0], atol=1e-15)

    def test_lookup(self):
        assert get_multiplier("riesz_2", 2).name == "riesz_2"
        assert get_multiplier("constant_one", 3).name == "constant_one"
        assert get_multiplier("halfspace_sign", 1).name == "halfspace_sign"

    def test_lookup_errors(self):
        with pytest.raises(ValueError, match="riesz index must lie in 1..2"):
            get_multiplier("riesz_3", 2)
        with pytest.raises(ValueError, match="Unknown multiplier"):
            get_multiplier("hilbert", 1)
        with pytest.raises(ValueError, match="Unknown multiplier"):
            get_multiplier("riesz_x", 1)
