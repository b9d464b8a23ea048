"""
Test Tile Universe
"""
import numpy as np
import pytest

from src.models.tile import Tile, TileError, semitile, tile_leq
from src.services.combinatorics.trees import maximal_elements
from src.services.combinatorics.universe import TileUniverse


def test_sizes(universe_1d, universe_2d):
    assert len(universe_1d) == 8
    assert len(universe_2d) == 32
    assert universe_2d.dim == 2


def test_membership_and_mask(universe_1d):
    first, last = universe_1d.tiles[0], universe_1d.tiles[-1]
    mask = universe_1d.mask([last, first])

    assert first in universe_1d
    assert Tile.from_indices(0, (0,), (0,)) not in universe_1d
    assert mask.sum() == 2
    assert universe_1d.subset(mask) == [first, last]


def test_unknown_tile(universe_1d):
    with pytest.raises(TileError, match="is not in the universe"):
        universe_1d.indices([Tile.from_indices(0, (0,), (0,))])


def test_duplicates_rejected(universe_1d):
    with pytest.raises(TileError, match="duplicate"):
        TileUniverse(universe_1d.tiles + universe_1d.tiles[:1])


def test_volumes(universe_2d):
    assert set(universe_2d.volumes.tolist()) == {4.0, 16.0}


def test_leq_matches_tile_order(universe_2d):
    tiles = universe_2d.tiles
    expected = np.array([[tile_leq(a, b) for b in tiles] for a in tiles])

    np.testing.assert_array_equal(universe_2d.leq, expected)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_rtree_matches_definition(universe_2d, r):
    tiles = universe_2d.tiles
    expected = np.array([
        [tile_leq(p, t) and semitile(p, r).contains(semitile(t, r)) for p in tiles]
        for t in tiles
    ])

    np.testing.assert_array_equal(universe_2d.rtree(r), expected)
    assert universe_2d.rtree(r) is universe_2d.rtree(r)


def test_maximal_mask(universe_2d):
    rng = np.random.default_rng(3)
    mask = rng.random(len(universe_2d)) < 0.5

    chosen = universe_2d.subset(mask)

    assert set(universe_2d.subset(universe_2d.maximal_mask(mask))) == maximal_elements(chosen)
