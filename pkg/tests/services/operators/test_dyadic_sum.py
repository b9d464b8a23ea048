"""
Test Model Operators B_ζ, B_N and their Maximal Form
"""
import numpy as np
import pytest

from src.models.grid import DirectionField, GridError
from src.models.tile import Tile
from src.services.analysis.multipliers import riesz
from src.services.operators.dyadic_sum import (
    active_tiles,
    default_zeta_grid,
    eval_B_N_r,
    eval_B_zeta_r,
    eval_sup_B,
)
from src.services.oracles import oracle_b_zeta


@pytest.fixture(scope="module")
def tiles(universe_2d):
    return universe_2d.tiles[::2]


class TestBZeta:
    def test_matches_oracle(self, coeffs_2d, tiles):
        m = riesz(1)
        for zeta in default_zeta_grid(tiles, 2)[:6]:
            fast = eval_B_zeta_r(coeffs_2d, zeta, tiles, m, 2).samples
            slow = oracle_b_zeta(coeffs_2d, zeta, tiles, m, 2)

            np.testing.assert_allclose(fast, slow, atol=1e-12)

    def test_no_active_tile(self, coeffs_2d, tiles):
        out = eval_B_zeta_r(coeffs_2d, (7.0, 7.0), tiles, riesz(1), 2)

        assert not np.any(out.samples)

    def test_zeta_length(self, coeffs_2d, tiles):
        with pytest.raises(GridError, match="components"):
            eval_B_zeta_r(coeffs_2d, (0.1,), tiles, riesz(1), 2)

    def test_active_tiles(self):
        p = Tile.from_indices(1, (0, 0), (0, 0))
        q = Tile.from_indices(1, (0, 0), (1, 1))

        assert active_tiles([q, p], (0.125, 0.375), 2) == [p]


class TestBN:
    def test_constant_n_matches_b_zeta(self, grid_2d, coeffs_2d, tiles):
        zeta = default_zeta_grid(tiles, 2)[0]
        N = DirectionField.constant(grid_2d, zeta)

        np.testing.assert_allclose(
            eval_B_N_r(coeffs_2d, N, tiles, riesz(1), 2).samples,
            eval_B_zeta_r(coeffs_2d, zeta, tiles, riesz(1), 2).samples,
            atol=1e-14,
        )

    def test_piecewise_n(self, sets_2d, coeffs_2d, tiles):
        _, N = sets_2d
        out = eval_B_N_r(coeffs_2d, N, tiles, riesz(1), 2).samples

        for zeta, cells in N.groups():
            expected = eval_B_zeta_r(coeffs_2d, zeta, tiles, riesz(1), 2).samples
            np.testing.assert_allclose(out[cells], expected[cells], atol=1e-14)


class TestSupB:
    def test_dominates_each_zeta(self, coeffs_2d, tiles):
        zetas = default_zeta_grid(tiles, 2)
        sup = eval_sup_B(coeffs_2d, tiles, riesz(1), 2, zetas).samples

        for zeta in zetas[:4]:
            assert np.all(sup >= np.abs(eval_B_zeta_r(coeffs_2d, zeta, tiles, riesz(1), 2).samples) - 1e-15)

    def test_empty_grid(self, coeffs_2d, tiles):
        with pytest.raises(ValueError, match="at least one frequency"):
            eval_sup_B(coeffs_2d, tiles, riesz(1), 2, [])

    def test_refinement_is_cumulative(self):
        p = Tile.from_indices(1, (0, 0), (0, 0))

        coarse = default_zeta_grid([p], 2)
        fine = default_zeta_grid([p], 2, refinement=1)

        assert coarse == [(0.125, 0.375)]
        assert len(fine) == 5
        assert set(coarse) <= set(fine)
