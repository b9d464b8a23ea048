"""
Test Grid Fourier Transforms
"""
import numpy as np
import pytest

from src.models.grid import GridError, GridFunction
from src.services.analysis.fourier import dilate, forward, inverse, modulate, translate


@pytest.fixture
def gaussian(grid_1d):
    x = grid_1d.axis
    return GridFunction(grid_1d, np.exp(-np.pi * x ** 2))


def test_forward_matches_continuum_transform(gaussian, grid_1d):
    """exp(−πx²) is its own Fourier transform"""
    f_hat = forward(gaussian)

    assert f_hat.domain == "frequency"
    np.testing.assert_allclose(f_hat.samples, np.exp(-np.pi * grid_1d.frequency_axis ** 2), atol=1e-5)


def test_inverse_undoes_forward(grid_2d):
    rng = np.random.default_rng(0)
    f = GridFunction(grid_2d, rng.normal(size=grid_2d.shape) + 1j * rng.normal(size=grid_2d.shape))

    np.testing.assert_allclose(inverse(forward(f)).samples, f.samples, atol=1e-12)


def test_plancherel(grid_2d):
    rng = np.random.default_rng(1)
    f = GridFunction(grid_2d, rng.normal(size=grid_2d.shape))

    assert forward(f).norm() == pytest.approx(f.norm(), rel=1e-12)


def test_domain_checked(gaussian):
    with pytest.raises(GridError, match="space-domain"):
        forward(forward(gaussian))
    with pytest.raises(GridError, match="frequency-domain"):
        inverse(gaussian)


class TestGridOperators:
    def test_translate(self, gaussian):
        shifted = translate(gaussian, [1.0])

        np.testing.assert_allclose(shifted.samples, np.roll(gaussian.samples, 4))

    def test_translate_off_grid(self, gaussian):
        with pytest.raises(GridError, match="not a multiple"):
            translate(gaussian, [0.1])

    def test_modulate_keeps_modulus(self, gaussian):
        moved = modulate(gaussian, [0.5])

        np.testing.assert_allclose(np.abs(moved.samples), np.abs(gaussian.samples))
        assert forward(moved).abs().argmax() == forward(gaussian).abs().argmax() + 8

    def test_dilate_identity(self, gaussian):
        assert dilate(gaussian, 0) is gaussian

    def test_dilate_spreads(self, gaussian, grid_1d):
        """D₂ exp(−πx²) = 2^{−1/2} exp(−πx²/4)"""
        spread = dilate(gaussian, 1)
        expected = 2 ** -0.5 * np.exp(-np.pi * grid_1d.axis ** 2 / 4)

        np.testing.assert_allclose(spread.samples, expected, atol=1e-5)
        assert spread.norm() == pytest.approx(gaussian.norm(), rel=1e-6)

    def test_dilate_shrinks(self, grid_1d):
        """D_½ exp(−πx²/4) = 2^{1/2} exp(−πx²)"""
        wide = GridFunction(grid_1d, np.exp(-np.pi * grid_1d.axis ** 2 / 4))
        narrow = dilate(wide, -1)
        expected = 2 ** 0.5 * np.exp(-np.pi * grid_1d.axis ** 2)

        np.testing.assert_allclose(narrow.samples, expected, atol=1e-5)
