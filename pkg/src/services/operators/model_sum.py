"""
Model Sum

Σ_p |⟨1_{E ∩ N⁻¹[ω_{p(r)}]}, ψ_p^N⟩ ⟨φ_p, f⟩|, where the pairing with the
N-dependent packet is a sum over the level sets S_ζ = {N = ζ} of ordinary
pairings ⟨1_{E ∩ S_ζ}, ψ_p^ζ⟩, each evaluated on the packet's spectrum block.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable

import numpy as np

from src.models.grid import DirectionField, GridError, SetIndicator
from src.models.tile import Tile
from src.services.analysis.fourier import forward_array
from src.services.analysis.multipliers import Multiplier
from src.services.analysis.packets import psi_block
from src.services.operators.coefficients import TileWeights
from src.services.operators.dyadic_sum import active_tiles

logger = logging.getLogger(__name__)


@dataclass
class ModelSum:
    total: float
    pairings: Dict[Tile, complex] = field(default_factory=dict)

    def term(self, p: Tile, coeffs: TileWeights) -> float:
        return abs(self.pairings.get(p, 0j)) * abs(coeffs[p])


def indicator_pairings(
    P: Iterable[Tile],
    E: SetIndicator,
    N: DirectionField,
    coeffs: TileWeights,
    m: Multiplier,
    r: int,
) -> Dict[Tile, complex]:
    """⟨1_{E ∩ N⁻¹[ω_{p(r)}]}, ψ_p^N⟩ = Σ_{x ∈ E, N(x) ∈ ω_{p(r)}} conj(ψ_p^{N(x)}(x)) hⁿ for each p"""
    grid = coeffs.cache.grid
    if E.grid != grid or N.grid != grid:
        raise GridError("E, N and the coefficients must share one grid")
    tiles = sorted(set(P), key=lambda t: t.sort_key())
    out = {p: 0j for p in tiles}
    for zeta, cells in N.groups(E.member):
        active = active_tiles(tiles, zeta, r)
        if not active:
            continue
        indicator_hat = forward_array(grid, cells.astype(np.complex128))
        for p in active:
            block = coeffs.cache.spectrum(p)
            out[p] += block.pair(indicator_hat, psi_block(block, p, zeta, m, r))
    return out


def check_normalization(E: SetIndicator, coeffs: TileWeights, tolerance: float = 1e-8):
    """
    Raises:
        ValueError: If |E| > 1 or ‖f‖₂ differs from 1
    """
    if E.measure > 1 + tolerance:
        raise ValueError(f"|E| must be at most 1, got {E.measure}")
    if coeffs.f_hat is not None:
        grid = coeffs.cache.grid
        norm = float(np.sqrt(np.sum(np.abs(coeffs.f_hat) ** 2) * grid.length ** (-grid.dim)))
        if abs(norm - 1.0) > tolerance:
            raise ValueError(f"‖f‖₂ must be 1, got {norm}")


def model_sum(
    P: Iterable[Tile],
    E: SetIndicator,
    N: DirectionField,
    coeffs: TileWeights,
    m: Multiplier,
    r: int,
    check: bool = True,
) -> ModelSum:
    """
    The model sum over P

    Raises:
        ValueError: If check is set and ‖f‖₂ ≠ 1 or |E| > 1
    """
    if check:
        check_normalization(E, coeffs)
    pairings = indicator_pairings(P, E, N, coeffs, m, r)
    total = float(sum(abs(a) * abs(coeffs[p]) for p, a in pairings.items()))
    return ModelSum(total, pairings)
