"""
Wave Packet Coefficients

⟨f, φ_p⟩ for a tile list, evaluated frequency side on each packet's
spectrum block.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from src.models.grid import GridError, GridFunction
from src.models.tile import Tile, TileError
from src.services.analysis.fourier import forward_array
from src.services.analysis.packets import PacketCache, synthesize_phi_p
from src.services.analysis.quadrature import inner_product

logger = logging.getLogger(__name__)


@dataclass
class TileWeights:
    """
    Coefficients c_p = ⟨f, φ_p⟩ keyed by tile

    Attributes:
        tiles: Tiles in insertion order
        coeff: Tile → complex coefficient
        cache: Packet spectra used to compute (and reuse) the coefficients
        f_hat: Spectrum of f when built from a function
    """

    tiles: List[Tile]
    coeff: Dict[Tile, complex]
    cache: PacketCache
    f_hat: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def from_function(cls, f: GridFunction, tiles: Iterable[Tile], cache: PacketCache) -> "TileWeights":
        """
        Raises:
            GridError: If f does not live on the cache's grid
            PacketResolutionError: If a tile's packet is not representable
        """
        if f.grid != cache.grid:
            raise GridError("f and the packet cache must share one grid")
        if f.domain != "space":
            raise GridError("coefficients expect a space-domain function")
        f_hat = forward_array(f.grid, f.samples)
        ordered = sorted(set(tiles), key=lambda t: t.sort_key())
        coeff = {p: cache.spectrum(p).pair(f_hat) for p in ordered}
        return cls(ordered, coeff, cache, f_hat)

    def __getitem__(self, p: Tile) -> complex:
        try:
            return self.coeff[p]
        except KeyError as e:
            raise TileError(f"no coefficient for {p!r}") from e

    def __contains__(self, p: Tile) -> bool:
        return p in self.coeff

    def __len__(self) -> int:
        return len(self.tiles)

    def get(self, p: Tile, default: complex = 0j) -> complex:
        return self.coeff.get(p, default)

    def abs_sq(self, tiles: Sequence[Tile]) -> np.ndarray:
        """|c_p|² aligned with tiles; tiles without a coefficient give 0"""
        return np.array([abs(self.coeff.get(p, 0j)) ** 2 for p in tiles], dtype=float)

    def restrict(self, tiles: Iterable[Tile]) -> "TileWeights":
        keep = [p for p in sorted(set(tiles), key=lambda t: t.sort_key())]
        return TileWeights(keep, {p: self[p] for p in keep}, self.cache, self.f_hat)

    def scaled(self, factor: complex) -> "TileWeights":
        f_hat = None if self.f_hat is None else self.f_hat * factor
        return TileWeights(list(self.tiles), {p: c * factor for p, c in self.coeff.items()}, self.cache, f_hat)


def recompute_coefficient(f: GridFunction, p: Tile, cache: PacketCache) -> complex:
    """⟨f, φ_p⟩ by spatial quadrature against the synthesized packet"""
    return inner_product(f, synthesize_phi_p(p, cache.phi_hat))


def coefficient_drift(f: GridFunction, weights: TileWeights) -> float:
    """max |c_p − spatial ⟨f, φ_p⟩| over the tiles"""
    drift = 0.0
    for p in weights.tiles:
        drift = max(drift, abs(weights[p] - recompute_coefficient(f, p, weights.cache)))
    return drift
