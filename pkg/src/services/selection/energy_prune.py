"""
Energy Pruning

Repeatedly selects the r-tree T′ with Δ(T′) ≥ ε/2 whose top has the
lexicographically smallest frequency center (coordinates permuted so that
semitile r plays the role of the last semitile), removes the full tree T
below that top, and stops when no r-tree of the remainder qualifies.
"""
import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Tuple

import numpy as np

from src.models.tile import Tile
from src.models.tree import Tree
from src.models.types import lex_key, semitile_permutation
from src.services.combinatorics.universe import TileUniverse
from src.services.functionals.energy import energy, tree_sums
from src.services.operators.coefficients import TileWeights

logger = logging.getLogger(__name__)


@dataclass
class EnergyPruneResult:
    epsilon: float
    r: int
    kept: FrozenSet[Tile] = frozenset()
    residual: FrozenSet[Tile] = frozenset()
    trees: List[Tuple[Tree, Tree]] = field(default_factory=list)
    deltas: List[float] = field(default_factory=list)
    sum_tops: float = 0.0
    flags: List[str] = field(default_factory=list)

    @property
    def c2(self) -> float:
        """Measured Σ|I_top|·ε²"""
        return self.sum_tops * self.epsilon ** 2

    @property
    def selected(self) -> List[Tuple[Tile, FrozenSet[Tile]]]:
        """(top, T_j′ members) per round, the input of the separation check"""
        return [(full.top, rtree.tiles) for full, rtree in self.trees]


def selection_key(t: Tile, permutation: Tuple[int, ...]) -> tuple:
    return (lex_key(t.freq.center(), permutation), t.scale, t.time.corner)


def prune_energy(P: Iterable[Tile], coeffs: TileWeights, r: int, universe: TileUniverse) -> EnergyPruneResult:
    """
    Energy pruning of P with tops drawn from the universe

    Returns:
        EnergyPruneResult; ε = 0 returns an empty, flagged result
    """
    tiles = frozenset(P)
    epsilon = energy(tiles, coeffs, r, universe).value if tiles else 0.0
    if epsilon <= 0:
        logger.warning("prune_energy on a set of zero energy; nothing selected")
        return EnergyPruneResult(0.0, r, residual=tiles, flags=["zero-energy"])

    permutation = semitile_permutation(universe.dim, r)
    rtree = universe.rtree(r)
    leq = universe.leq
    remaining = universe.mask(tiles)
    result = EnergyPruneResult(epsilon, r)
    threshold_sq = (epsilon / 2) ** 2

    while remaining.any():
        sums = tree_sums(universe, remaining, coeffs, r)
        nonempty = (rtree & remaining).any(axis=1)
        candidates = np.flatnonzero(nonempty & (sums >= threshold_sq))
        if candidates.size == 0:
            break
        best = min(candidates, key=lambda i: selection_key(universe.tiles[i], permutation))
        top = universe.tiles[best]
        full = leq[:, best] & remaining
        part = rtree[best] & remaining
        result.trees.append((Tree(frozenset(universe.subset(full)), top), Tree(frozenset(universe.subset(part)), top)))
        result.deltas.append(float(np.sqrt(sums[best])))
        remaining = remaining & ~full
        logger.debug(f"prune_energy: selected top {top!r} with Δ={result.deltas[-1]:.4g}")

    result.kept = frozenset().union(*(full.tiles for full, _ in result.trees)) if result.trees else frozenset()
    result.residual = tiles - result.kept
    result.sum_tops = float(sum(float(full.top.time.volume()) for full, _ in result.trees))
    return result
