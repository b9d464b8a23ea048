"""
Test Wave Packet Coefficients
"""
import numpy as np
import pytest

from src.models.grid import Grid, GridError, GridFunction
from src.models.tile import TileError
from src.services.operators.coefficients import TileWeights, coefficient_drift


def test_matches_spatial_quadrature(f_2d, coeffs_2d):
    assert coefficient_drift(f_2d, coeffs_2d.restrict(coeffs_2d.tiles[:8])) <= 1e-12


def test_tiles_sorted(coeffs_2d):
    keys = [p.sort_key() for p in coeffs_2d.tiles]

    assert keys == sorted(keys)
    assert len(coeffs_2d) == 32


def test_grid_mismatch(cache_2d, universe_2d):
    f = GridFunction(Grid(2, 4, 5), np.ones((32, 32)))

    with pytest.raises(GridError, match="share one grid"):
        TileWeights.from_function(f, universe_2d.tiles, cache_2d)


def test_frequency_domain_rejected(cache_2d, universe_2d, grid_2d):
    f = GridFunction.zeros(grid_2d, "frequency")

    with pytest.raises(GridError, match="space-domain"):
        TileWeights.from_function(f, universe_2d.tiles, cache_2d)


def test_missing_tile(coeffs_2d):
    partial = coeffs_2d.restrict(coeffs_2d.tiles[:3])

    with pytest.raises(TileError, match="no coefficient"):
        partial[coeffs_2d.tiles[5]]
    assert partial.get(coeffs_2d.tiles[5]) == 0j
    assert partial.abs_sq(coeffs_2d.tiles[2:4])[1] == 0.0


def test_scaled(coeffs_2d):
    p = coeffs_2d.tiles[0]
    doubled = coeffs_2d.scaled(2.0)

    assert doubled[p] == pytest.approx(2.0 * coeffs_2d[p])
    np.testing.assert_allclose(doubled.f_hat, 2.0 * coeffs_2d.f_hat)


def test_linear_in_f(grid_2d, cache_2d, universe_2d, f_2d):
    g = GridFunction(grid_2d, 3j * f_2d.samples)
    tiles = universe_2d.tiles[:4]

    a = TileWeights.from_function(f_2d, tiles, cache_2d)
    b = TileWeights.from_function(g, tiles, cache_2d)

    for p in tiles:
        assert b[p] == pytest.approx(3j * a[p], abs=1e-14)
