"""
Model Operators

B_ζ^r f = Σ_{p : ζ ∈ ω_{p(r)}} ⟨f, φ_p⟩ ψ_p^ζ, its N-linearized form
B_N^r f(x) = B_{N(x)}^r f(x), and the pointwise max over a finite ζ set.
All three accumulate packet blocks on the dual grid and transform once
per ζ.
"""
import logging
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from src.models.grid import DirectionField, Grid, GridError, GridFunction
from src.models.tile import Tile, semitile
from src.services.analysis.fourier import inverse_array
from src.services.analysis.multipliers import Multiplier
from src.services.analysis.packets import psi_block, zeta_in_semitile
from src.services.operators.coefficients import TileWeights

logger = logging.getLogger(__name__)


@lru_cache(maxsize=16)
def frequency_vectors(grid: Grid) -> np.ndarray:
    """Dual grid as one array of shape grid.shape + (n,)"""
    out = np.stack(np.broadcast_arrays(*grid.frequencies()), axis=-1)
    out.setflags(write=False)
    return out


def active_tiles(P: Iterable[Tile], zeta: Sequence[float], r: int) -> List[Tile]:
    """Members with ζ ∈ ω_{p(r)}, in universe order"""
    return sorted((p for p in P if zeta_in_semitile(p, zeta, r)), key=lambda t: t.sort_key())


def b_zeta_spectrum(coeffs: TileWeights, zeta: Sequence[float], P: Iterable[Tile], m: Multiplier, r: int) -> np.ndarray:
    """Spectrum of B_ζ^r f on the dual grid"""
    spectrum = np.zeros(coeffs.cache.grid.shape, dtype=np.complex128)
    for p in active_tiles(P, zeta, r):
        block = coeffs.cache.spectrum(p)
        spectrum[block.slices] += coeffs[p] * psi_block(block, p, zeta, m, r)
    return spectrum


def eval_B_zeta_r(
    coeffs: TileWeights,
    zeta: Sequence[float],
    P: Iterable[Tile],
    m: Multiplier,
    r: int,
) -> GridFunction:
    """
    B_ζ^r f sampled on the grid

    Args:
        coeffs: ⟨f, φ_p⟩ for the tiles of P (f enters only through these)
        zeta: Frequency ζ
        P: Tile set
        m: Multiplier
        r: Semitile index

    Returns:
        Zero function when no tile of P has ζ in its r-th semitile
    """
    grid = coeffs.cache.grid
    if len(zeta) != grid.dim:
        raise GridError(f"ζ must have {grid.dim} components, got {len(zeta)}")
    return GridFunction(grid, inverse_array(grid, b_zeta_spectrum(coeffs, zeta, P, m, r)))


def eval_B_N_r(coeffs: TileWeights, N: DirectionField, P: Iterable[Tile], m: Multiplier, r: int) -> GridFunction:
    """B_N^r f(x) = B_{N(x)}^r f(x): one transform per distinct value of N"""
    grid = coeffs.cache.grid
    if N.grid != grid:
        raise GridError("N and the coefficients must share one grid")
    tiles = list(P)
    out = np.zeros(grid.shape, dtype=np.complex128)
    for zeta, cells in N.groups():
        if not active_tiles(tiles, zeta, r):
            continue
        values = inverse_array(grid, b_zeta_spectrum(coeffs, zeta, tiles, m, r))
        out[cells] = values[cells]
    return GridFunction(grid, out)


def eval_sup_B(
    coeffs: TileWeights,
    P: Iterable[Tile],
    m: Multiplier,
    r: int,
    zeta_grid: Sequence[Sequence[float]],
) -> GridFunction:
    """
    max over ζ ∈ zeta_grid of |B_ζ^r f|, a pointwise lower bound of the sup over ℝⁿ

    Raises:
        ValueError: If zeta_grid is empty
    """
    if len(zeta_grid) == 0:
        raise ValueError("zeta_grid must contain at least one frequency")
    grid = coeffs.cache.grid
    tiles = list(P)
    out = np.zeros(grid.shape)
    for zeta in zeta_grid:
        if not active_tiles(tiles, zeta, r):
            continue
        out = np.maximum(out, np.abs(inverse_array(grid, b_zeta_spectrum(coeffs, zeta, tiles, m, r))))
    return GridFunction(grid, out)


def default_zeta_grid(P: Iterable[Tile], r: int, refinement: int = 0) -> List[Tuple[float, ...]]:
    """
    Centers of ω_{p(r)} plus, for each level ρ = 1..refinement, the centers of
    their dyadic descendants ρ levels down

    Levels are cumulative, so raising the refinement only adds frequencies.
    """
    points = set()
    for p in P:
        cube = semitile(p, r)
        for level in range(refinement + 1):
            for sub in cube.descendants(cube.scale - level):
                points.add(tuple(float(c) for c in sub.center()))
    return sorted(points)
