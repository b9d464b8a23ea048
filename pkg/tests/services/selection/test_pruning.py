"""
Test Mass and Energy Pruning
"""
import pytest

from src.models.grid import DirectionField, SetIndicator
from src.models.tile import Tile
from src.services.combinatorics.trees import check_tree_cover, separation_violations
from src.services.ensemble import random_tile_set
from src.services.functionals.energy import delta, energy
from src.services.functionals.mass import MassTable
from src.services.selection.energy_prune import prune_energy
from src.services.selection.mass_prune import (
    greedy_disjoint_enlargements,
    prune_mass,
    selected_rectangles_disjoint,
    selected_sets_disjoint,
)


@pytest.fixture(scope="module")
def table(universe_2d, sets_2d):
    E, N = sets_2d
    return MassTable(universe_2d, E, N)


class TestPruneMass:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_residual_mass_quartered(self, table, universe_2d, seed):
        P = random_tile_set(seed, universe_2d, 16)

        result = prune_mass(P, table)

        assert table.of(result.residual).value <= result.mu / 4
        assert result.kept | result.residual == P
        assert not result.kept & result.residual

    def test_tree_cover_of_kept(self, table, universe_2d):
        result = prune_mass(universe_2d.tiles, table)

        assert result.kept
        assert check_tree_cover(result.kept, result.tree_cover) == []
        assert {t.top for t in result.tree_cover} == set(result.u_max)
        assert result.c1 == pytest.approx(result.sum_tops * result.mu)

    def test_selection_disjoint(self, table, universe_2d):
        result = prune_mass(universe_2d.tiles, table)

        assert selected_rectangles_disjoint(result)
        assert selected_sets_disjoint(result, table)

    def test_association_bound(self, table, universe_2d):
        result = prune_mass(universe_2d.tiles, table)

        for lhs, rhs in result.association.values():
            assert lhs <= rhs

    def test_empty(self, table):
        result = prune_mass([], table)

        assert result.flags == ["empty"]
        assert result.mu == 0.0

    def test_zero_mass(self, universe_2d, grid_2d):
        table = MassTable(universe_2d, SetIndicator.empty(grid_2d), DirectionField.constant(grid_2d, [0.1, 0.1]))

        result = prune_mass(universe_2d.tiles[:5], table)

        assert result.flags == ["zero-mass"]
        assert result.residual == frozenset(universe_2d.tiles[:5])


class TestGreedySelection:
    def test_prefers_large_time_cubes(self):
        big = Tile.from_indices(2, (0,), (0,))
        small = Tile.from_indices(1, (0,), (0,))

        assert greedy_disjoint_enlargements([small, big], 0) == (big,)

    def test_disjoint_frequencies_both_selected(self):
        a = Tile.from_indices(1, (0,), (0,))
        b = Tile.from_indices(1, (0,), (1,))

        assert greedy_disjoint_enlargements([b, a], 3) == (a, b)


class TestPruneEnergy:
    @pytest.mark.parametrize("r", [2, 4])
    @pytest.mark.parametrize("seed", [0, 1])
    def test_residual_energy_halved(self, universe_2d, coeffs_2d, r, seed):
        P = random_tile_set(seed, universe_2d, 16)

        result = prune_energy(P, coeffs_2d, r, universe_2d)

        assert energy(result.residual, coeffs_2d, r, universe_2d).value <= result.epsilon / 2
        assert result.kept | result.residual == P

    def test_selected_trees(self, universe_2d, coeffs_2d):
        result = prune_energy(universe_2d.tiles, coeffs_2d, 2, universe_2d)

        assert result.trees
        for (full, part), value in zip(result.trees, result.deltas):
            assert part.tiles <= full.tiles
            assert part.is_i_tree(2)
            assert value >= result.epsilon / 2
            assert delta(part, coeffs_2d) == pytest.approx(value)

        fulls = [full.tiles for full, _ in result.trees]
        assert sum(len(t) for t in fulls) == len(frozenset().union(*fulls))

    def test_separation(self, universe_2d, coeffs_2d):
        result = prune_energy(universe_2d.tiles, coeffs_2d, 2, universe_2d)

        assert separation_violations(result.selected) == []

    def test_single_tile_selected(self, universe_2d, coeffs_2d):
        p = universe_2d.tiles[7]

        result = prune_energy([p], coeffs_2d, 3, universe_2d)

        assert result.kept == {p}
        assert result.c2 == pytest.approx(result.sum_tops * result.epsilon ** 2)

    def test_zero_energy(self, universe_2d, coeffs_2d):
        result = prune_energy(universe_2d.tiles[:4], coeffs_2d.scaled(0.0), 2, universe_2d)

        assert result.flags == ["zero-energy"]
        assert result.trees == []
