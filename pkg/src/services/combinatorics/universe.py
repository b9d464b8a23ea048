"""
Tile Universe

A finite truncation of the tile grid with vectorized relation matrices.
All "sup over u" and "sup over tops" computations run over this set.
"""
import logging
from functools import cached_property
from typing import Dict, Iterable, List, Sequence

import numpy as np

from src.models.cube import DyadicCube
from src.models.tile import SemitileIndex, Tile, TileError, generate_universe

logger = logging.getLogger(__name__)


def _contains(big_scale, big_corner, small_scale, small_corner) -> np.ndarray:
    """Vectorized dyadic containment small ⊆ big over broadcast arrays"""
    shift = big_scale - small_scale
    ok = shift >= 0
    safe = np.where(ok, shift, 0)
    inside = np.all(np.right_shift(small_corner, safe[..., None]) == big_corner, axis=-1)
    return ok & inside


class TileUniverse:
    """
    Ordered tile list plus integer arrays and cached relation matrices

    Args:
        tiles: Tiles (kept in the given order)
    """

    def __init__(self, tiles: Sequence[Tile]):
        self.tiles: List[Tile] = list(tiles)
        if not self.tiles:
            self.dim = 0
        else:
            self.dim = self.tiles[0].dim
            if any(t.dim != self.dim for t in self.tiles):
                raise TileError("universe tiles must share one dimension")
        self.index: Dict[Tile, int] = {t: i for i, t in enumerate(self.tiles)}
        if len(self.index) != len(self.tiles):
            raise TileError("universe contains duplicate tiles")
        n = max(self.dim, 1)
        self.scale = np.array([t.scale for t in self.tiles], dtype=np.int64)
        self.time_corner = np.array([t.time.corner for t in self.tiles], dtype=np.int64).reshape(-1, n)
        self.freq_corner = np.array([t.freq.corner for t in self.tiles], dtype=np.int64).reshape(-1, n)
        self._rtree: Dict[int, np.ndarray] = {}

    @classmethod
    def generate(cls, n: int, k_min: int, k_max: int, time_box: DyadicCube, freq_box: DyadicCube) -> "TileUniverse":
        return cls(generate_universe(n, k_min, k_max, time_box, freq_box))

    def __len__(self) -> int:
        return len(self.tiles)

    def __iter__(self):
        return iter(self.tiles)

    def __contains__(self, tile: Tile) -> bool:
        return tile in self.index

    def indices(self, tiles: Iterable[Tile]) -> np.ndarray:
        try:
            return np.array(sorted(self.index[t] for t in tiles), dtype=np.int64)
        except KeyError as e:
            raise TileError(f"tile {e.args[0]!r} is not in the universe") from e

    def mask(self, tiles: Iterable[Tile]) -> np.ndarray:
        out = np.zeros(len(self.tiles), dtype=bool)
        out[self.indices(tiles)] = True
        return out

    def subset(self, mask: np.ndarray) -> List[Tile]:
        return [self.tiles[i] for i in np.flatnonzero(mask)]

    @property
    def volumes(self) -> np.ndarray:
        """|I_t| as floats"""
        return 2.0 ** (self.scale.astype(float) * self.dim)

    @cached_property
    def leq(self) -> np.ndarray:
        """leq[a, b] = tile_leq(tiles[a], tiles[b])"""
        s = self.scale
        time_ok = _contains(s[None, :], self.time_corner[None, :, :], s[:, None], self.time_corner[:, None, :])
        # ω_b ⊆ ω_a: frequency scales are −scale
        freq_ok = _contains(-s[:, None], self.freq_corner[:, None, :], -s[None, :], self.freq_corner[None, :, :])
        return time_ok & freq_ok

    def semitile_corners(self, i: int) -> np.ndarray:
        bits = np.array(SemitileIndex(i, self.dim).bits(), dtype=np.int64)
        return 2 * self.freq_corner + bits

    def rtree(self, r: int) -> np.ndarray:
        """
        rtree[t, p]: p lies below t and ω_{t(r)} ⊆ ω_{p(r)}

        Row t is the maximal r-tree with top t inside the universe.
        """
        cached = self._rtree.get(r)
        if cached is None:
            semi = self.semitile_corners(r)
            s = self.scale
            # semitile scale is −scale − 1; ω_{t(r)} ⊆ ω_{p(r)} with t = row, p = column
            semi_ok = _contains(-s[None, :] - 1, semi[None, :, :], -s[:, None] - 1, semi[:, None, :])
            cached = self.leq.T & semi_ok
            self._rtree[r] = cached
        return cached

    def maximal_mask(self, mask: np.ndarray) -> np.ndarray:
        """Members of the masked set not strictly below another member"""
        leq = self.leq[np.ix_(mask, mask)]
        strictly_below = leq & ~leq.T
        out = np.zeros(len(self.tiles), dtype=bool)
        out[np.flatnonzero(mask)[~strictly_below.any(axis=1)]] = True
        return out
