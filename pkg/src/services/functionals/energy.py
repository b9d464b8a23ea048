"""
Energy

ℰ(P) = sup over tops t of (|I_t|⁻¹ Σ_{p ∈ P, p ≤ t, ω_{t(r)} ⊆ ω_{p(r)}} |⟨f, φ_p⟩|²)^{1/2},
the tops truncated to the universe.
"""
import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Optional, Sequence, Union

import numpy as np

from src.models.tile import Tile, TileError
from src.models.tree import Tree
from src.services.combinatorics.universe import TileUniverse
from src.services.functionals.mass import as_universe
from src.services.operators.coefficients import TileWeights

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnergyValue:
    """Value of the energy functional with its maximizing top and r-tree"""

    value: float
    witness: Optional[Tile] = None
    tree: FrozenSet[Tile] = field(default_factory=frozenset)


def tree_sums(universe: TileUniverse, mask: np.ndarray, coeffs: TileWeights, r: int) -> np.ndarray:
    """|I_t|⁻¹ Σ |c_p|² over the maximal r-tree of the masked set below each universe top t"""
    weights = coeffs.abs_sq(universe.tiles) * mask
    return (universe.rtree(r).astype(float) @ weights) / universe.volumes


def energy(
    P: Iterable[Tile],
    coeffs: TileWeights,
    r: int,
    universe: Union[TileUniverse, Sequence[Tile]],
) -> EnergyValue:
    """
    ℰ(P) over universe tops

    Raises:
        TileError: If P has a tile outside the universe or without a coefficient
    """
    universe = as_universe(universe)
    tiles = set(P)
    missing = [p for p in tiles if p not in coeffs]
    if missing:
        raise TileError(f"no coefficient for {len(missing)} tiles, e.g. {missing[0]!r}")
    if not tiles:
        return EnergyValue(0.0)
    mask = universe.mask(tiles)
    sums = tree_sums(universe, mask, coeffs, r)
    best = int(np.argmax(sums))
    members = frozenset(universe.subset(universe.rtree(r)[best] & mask))
    return EnergyValue(float(np.sqrt(max(sums[best], 0.0))), universe.tiles[best], members)


def delta(tree: Tree, coeffs: TileWeights) -> float:
    """Δ(T) = (|I_T|⁻¹ Σ_{p ∈ T} |⟨f, φ_p⟩|²)^{1/2}"""
    total = sum(abs(coeffs[p]) ** 2 for p in tree.tiles)
    return float(np.sqrt(total / float(tree.top.time.volume())))
