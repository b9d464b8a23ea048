"""
Mass

ℳ({p}) = sup over u ≥ p of ∫_{E ∩ N⁻¹[ω_u]} |I_u|⁻¹ (1 + |x − c(I_u)|/ℓ_u)^{−a} dx
with a = 10n by default, the sup truncated to a finite universe.

The integrals depend only on u, so a MassTable computes them once per
universe tile; mass_single and mass are maxima over rows of the order
matrix.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Union

import numpy as np

from src.models.cube import DyadicCube
from src.models.grid import DirectionField, GridError, SetIndicator
from src.models.tile import Tile, TileError, tile_leq
from src.services.combinatorics.universe import TileUniverse

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MassValue:
    """Value of the mass functional; witness is the maximizing u, member the p it came from"""

    value: float
    witness: Optional[Tile] = None
    member: Optional[Tile] = None


def as_universe(universe: Union[TileUniverse, Sequence[Tile]]) -> TileUniverse:
    return universe if isinstance(universe, TileUniverse) else TileUniverse(list(universe))


class MassTable:
    """
    Per-universe-tile kernel integrals against E ∩ N⁻¹[ω_u]

    Args:
        universe: Tiles the sup runs over
        E: Set indicator
        N: Direction field on the same grid
        exponent: Kernel decay exponent (default 10n)

    Raises:
        GridError: If E and N live on different grids
    """

    def __init__(
        self,
        universe: Union[TileUniverse, Sequence[Tile]],
        E: SetIndicator,
        N: DirectionField,
        exponent: Optional[float] = None,
    ):
        if E.grid != N.grid:
            raise GridError("E and N must share one grid")
        self.universe = as_universe(universe)
        self.E = E
        self.N = N
        self.grid = E.grid
        self.exponent = float(10 * self.grid.dim if exponent is None else exponent)
        coords = [np.broadcast_to(c, self.grid.shape) for c in self.grid.coordinates()]
        self._points = np.stack([c[E.member] for c in coords], axis=-1).reshape(-1, self.grid.dim)
        self._directions = N.value[E.member].reshape(-1, self.grid.dim)
        self._freq_masks: Dict[DyadicCube, np.ndarray] = {}
        self.values = np.array([self._integral(u) for u in self.universe], dtype=float)
        logger.debug(f"mass table over {len(self.universe)} tiles, |E| = {E.measure}")

    def freq_mask(self, cube: DyadicCube) -> np.ndarray:
        """Which points of E have N(x) ∈ cube"""
        cached = self._freq_masks.get(cube)
        if cached is None:
            side = float(cube.side())
            corner = np.asarray(cube.corner, dtype=float)
            cached = np.all(np.floor(self._directions / side) == corner, axis=1)
            self._freq_masks[cube] = cached
        return cached

    def _scaled_distance(self, u: Tile, selected: np.ndarray) -> np.ndarray:
        center = np.array([float(c) for c in u.time.center()])
        return np.sqrt(np.sum((self._points[selected] - center) ** 2, axis=1)) / 2.0 ** u.scale

    def _integral(self, u: Tile) -> float:
        selected = self.freq_mask(u.freq)
        if not selected.any():
            return 0.0
        kernel = (1.0 + self._scaled_distance(u, selected)) ** (-self.exponent)
        return float(np.sum(kernel) * self.grid.cell_volume / float(u.time.volume()))

    def integral(self, u: Tile) -> float:
        index = self.universe.index.get(u)
        return float(self.values[index]) if index is not None else self._integral(u)

    def annulus_integrals(self, u: Tile, levels: int) -> np.ndarray:
        """
        ∫ over E ∩ N⁻¹[ω_u] ∩ (2^k I_u ∖ 2^{k−1} I_u) of (1 + |x − c(I_u)|/ℓ)^{−a}, k = 0..levels−1

        Enlargements are closed cubes about c(I_u) (sup-norm balls); ½I_u = ∅.
        """
        selected = self.freq_mask(u.freq)
        out = np.zeros(levels)
        if not selected.any():
            return out
        center = np.array([float(c) for c in u.time.center()])
        ell = 2.0 ** u.scale
        sup_dist = np.max(np.abs(self._points[selected] - center), axis=1) / ell
        kernel = (1.0 + self._scaled_distance(u, selected)) ** (-self.exponent)
        inner = -1.0
        for k in range(levels):
            outer = 2.0 ** (k - 1)
            ring = (sup_dist <= outer) & (sup_dist > inner)
            out[k] = float(np.sum(kernel[ring]) * self.grid.cell_volume)
            inner = outer
        return out

    def local_mask(self, u: Tile, k: int) -> np.ndarray:
        """Points of E in N⁻¹[ω_u] ∩ 2^k I_u (closed enlargement)"""
        center = np.array([float(c) for c in u.time.center()])
        sup_dist = np.max(np.abs(self._points - center), axis=1) / 2.0 ** u.scale if len(self._points) else np.zeros(0)
        return self.freq_mask(u.freq) & (sup_dist <= 2.0 ** (k - 1))

    def local_measure(self, u: Tile, k: int) -> float:
        """|E ∩ N⁻¹[ω_u] ∩ 2^k I_u|"""
        return float(np.count_nonzero(self.local_mask(u, k)) * self.grid.cell_volume)

    def admissible(self, p: Tile) -> np.ndarray:
        index = self.universe.index.get(p)
        if index is not None:
            return self.universe.leq[index]
        return np.array([tile_leq(p, u) for u in self.universe], dtype=bool)

    def single(self, p: Tile) -> MassValue:
        """
        ℳ({p}) over the universe

        Raises:
            TileError: If no universe tile lies above p
        """
        allowed = self.admissible(p)
        if not allowed.any():
            raise TileError(f"no universe tile lies above {p!r}")
        candidates = np.flatnonzero(allowed)
        best = candidates[int(np.argmax(self.values[candidates]))]
        return MassValue(float(self.values[best]), self.universe.tiles[best], p)

    def of(self, P: Iterable[Tile]) -> MassValue:
        """ℳ(P) = max over members; ℳ(∅) = 0"""
        best = MassValue(0.0)
        for p in sorted(set(P), key=lambda t: t.sort_key()):
            value = self.single(p)
            if best.witness is None or value.value > best.value:
                best = value
        return best


def mass_single(
    p: Tile,
    E: SetIndicator,
    N: DirectionField,
    universe: Union[TileUniverse, Sequence[Tile]],
    exponent: Optional[float] = None,
) -> MassValue:
    return MassTable(universe, E, N, exponent).single(p)


def mass(
    P: Iterable[Tile],
    E: SetIndicator,
    N: DirectionField,
    universe: Union[TileUniverse, Sequence[Tile]],
    exponent: Optional[float] = None,
) -> MassValue:
    return MassTable(universe, E, N, exponent).of(P)
