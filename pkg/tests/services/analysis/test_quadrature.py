"""
Test Quadrature, Weak-L² and Dyadic Maximal Averages
"""
import numpy as np
import pytest

from src.models.cube import DyadicCube
from src.models.grid import GridError, GridFunction
from src.services.analysis.quadrature import (
    cube_average,
    distribution_function,
    dyadic_maximal,
    dyadic_maximal_function,
    inner_product,
    l2_norm,
    weak_l2_quasinorm,
)


@pytest.fixture
def unit_bump(grid_1d):
    """Indicator of [0, 1)"""
    values = np.zeros(64)
    values[32:36] = 1.0
    return GridFunction(grid_1d, values)


def test_inner_product_conjugates_second_argument(grid_1d):
    f = GridFunction(grid_1d, np.full(64, 1j))
    g = GridFunction(grid_1d, np.ones(64))

    assert inner_product(f, g) == pytest.approx(16j)
    assert inner_product(g, f) == pytest.approx(-16j)


def test_inner_product_rejects_frequency_domain(grid_1d):
    f = GridFunction.zeros(grid_1d, "frequency")

    with pytest.raises(GridError, match="space-domain"):
        inner_product(f, f)


def test_l2_norm(unit_bump):
    assert l2_norm(unit_bump) == pytest.approx(1.0)


class TestWeakL2:
    def test_zero(self, grid_1d):
        assert weak_l2_quasinorm(GridFunction.zeros(grid_1d)) == 0.0

    def test_scaled_indicator(self, unit_bump):
        """c·1_A → |c|·|A|^{1/2}"""
        assert weak_l2_quasinorm(unit_bump.scaled(2.0)) == pytest.approx(2.0)

    def test_two_levels(self, grid_1d):
        """3 on one cell and 1 on three more: max(3·¼^{1/2}, 1·1^{1/2}) = 1.5"""
        values = np.zeros(64)
        values[0] = 3.0
        values[1:4] = 1.0

        assert weak_l2_quasinorm(GridFunction(grid_1d, values)) == pytest.approx(1.5)

    def test_bounded_by_l2(self, grid_2d):
        rng = np.random.default_rng(2)
        g = GridFunction(grid_2d, rng.normal(size=grid_2d.shape))

        assert weak_l2_quasinorm(g) <= g.norm() + 1e-12

    def test_distribution_function(self):
        levels, measures = distribution_function(np.array([1.0, 3.0, 1.0, 0.0]), 0.5)

        np.testing.assert_allclose(levels, [3.0, 1.0])
        np.testing.assert_allclose(measures, [0.5, 1.5])


class TestDyadicMaximal:
    def test_cube_average(self, unit_bump, grid_1d):
        assert cube_average(unit_bump.samples, grid_1d, DyadicCube(1, (0,))) == pytest.approx(0.5)
        assert cube_average(unit_bump.samples, grid_1d, DyadicCube(1, (20,))) == 0.0

    def test_sup_over_ancestors(self, unit_bump, grid_1d):
        value, cube = dyadic_maximal(unit_bump.samples, grid_1d, DyadicCube(0, (0,)), DyadicCube(2, (0,)))

        assert value == pytest.approx(1.0)
        assert cube == DyadicCube(0, (0,))

    def test_empty_cube_reaches_up(self, unit_bump, grid_1d):
        """J = [1, 2) sees the bump only through [0, 2)"""
        value, cube = dyadic_maximal(unit_bump.samples, grid_1d, DyadicCube(0, (1,)), DyadicCube(2, (0,)))

        assert value == pytest.approx(0.5)
        assert cube == DyadicCube(1, (0,))

    def test_cube_outside_window(self, unit_bump, grid_1d):
        with pytest.raises(ValueError, match="not inside the window"):
            dyadic_maximal(unit_bump.samples, grid_1d, DyadicCube(0, (5,)), DyadicCube(2, (0,)))

    def test_maximal_function(self, unit_bump, grid_1d):
        out = dyadic_maximal_function(unit_bump, DyadicCube(2, (0,)), 0)

        assert out[33] == pytest.approx(1.0)
        assert out[37] == pytest.approx(0.5)
        assert out[45] == pytest.approx(0.25)
        assert out[10] == 0.0

    def test_maximal_function_scale_floor(self, unit_bump):
        with pytest.raises(ValueError, match="below the grid spacing"):
            dyadic_maximal_function(unit_bump, DyadicCube(2, (0,)), -3)
