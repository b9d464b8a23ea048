"""
Test Energy Functional
"""
import numpy as np
import pytest

from src.models.tile import TileError
from src.models.tree import Tree
from src.services.ensemble import random_tile_set, random_tree
from src.services.functionals.energy import delta, energy
from src.services.oracles import oracle_energy


@pytest.mark.parametrize("r", [1, 2, 3, 4])
@pytest.mark.parametrize("seed", [0, 1])
def test_matches_oracle(universe_2d, coeffs_2d, r, seed):
    P = random_tile_set(seed, universe_2d, 10)

    result = energy(P, coeffs_2d, r, universe_2d)

    assert result.value == pytest.approx(oracle_energy(P, coeffs_2d, r, universe_2d.tiles), rel=1e-12)


def test_empty_set(universe_2d, coeffs_2d):
    assert energy([], coeffs_2d, 2, universe_2d).value == 0.0


def test_missing_coefficient(universe_2d, coeffs_2d):
    partial = coeffs_2d.restrict(universe_2d.tiles[:4])

    with pytest.raises(TileError, match="no coefficient"):
        energy(universe_2d.tiles[:6], partial, 2, universe_2d)


def test_witness_tree_comes_from_p(universe_2d, coeffs_2d):
    P = random_tile_set(4, universe_2d, 12)

    result = energy(P, coeffs_2d, 2, universe_2d)

    assert result.tree <= P
    assert result.witness in universe_2d


def test_dominates_singletons(universe_2d, coeffs_2d):
    """Each p is its own r-tree top, so ℰ(P) ≥ |c_p|/|I_p|^{1/2}"""
    P = universe_2d.tiles[::4]
    value = energy(P, coeffs_2d, 3, universe_2d).value

    for p in P:
        assert value >= abs(coeffs_2d[p]) / np.sqrt(float(p.time.volume())) - 1e-15


def test_delta(universe_2d, coeffs_2d):
    tree = random_tree(2, universe_2d, 6)
    total = sum(abs(coeffs_2d[p]) ** 2 for p in tree.tiles)

    assert delta(tree, coeffs_2d) == pytest.approx(np.sqrt(total / float(tree.top.time.volume())))
    assert delta(Tree(frozenset(), tree.top), coeffs_2d) == 0.0
