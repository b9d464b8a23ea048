"""
Maximal Modulated Multiplier

𝒞f(x) = sup_ζ |M_ζ B M_{−ζ} f|(x) with (M_ζ B M_{−ζ} f)̂(ξ) = m(ξ − ζ) f̂(ξ),
evaluated over a finite set of ζ entirely on the frequency side.
"""
import logging
from typing import List, Sequence, Tuple

import numpy as np

from src.models.grid import Grid, GridError, GridFunction
from src.services.analysis.fourier import forward, inverse_array
from src.services.analysis.multipliers import Multiplier
from src.services.operators.dyadic_sum import frequency_vectors

logger = logging.getLogger(__name__)


def modulated_multiplier(f_hat: np.ndarray, grid: Grid, m: Multiplier, zeta: Sequence[float]) -> np.ndarray:
    """Space samples of M_ζ B M_{−ζ} f; m(0) is m.origin when defined, else 0"""
    if len(zeta) != grid.dim:
        raise GridError(f"ζ must have {grid.dim} components, got {len(zeta)}")
    origin = m.origin if m.origin is not None else 0.0
    symbol = m(frequency_vectors(grid) - np.asarray(zeta, dtype=float), origin_value=origin)
    return inverse_array(grid, symbol * f_hat)


def sjolin_operator(f: GridFunction, m: Multiplier, zeta_grid: Sequence[Sequence[float]]) -> GridFunction:
    """
    Pointwise max over ζ ∈ zeta_grid of |M_ζ B M_{−ζ} f|

    Raises:
        ValueError: If zeta_grid is empty
    """
    if len(zeta_grid) == 0:
        raise ValueError("zeta_grid must contain at least one frequency")
    f_hat = forward(f).samples
    out = np.zeros(f.grid.shape)
    for zeta in zeta_grid:
        out = np.maximum(out, np.abs(modulated_multiplier(f_hat, f.grid, m, zeta)))
    return GridFunction(f.grid, out)


def uniform_zeta_grid(grid: Grid, per_axis: int) -> List[Tuple[float, ...]]:
    """
    per_axis^n frequencies on the dual lattice, spread over the middle half of the span

    Raises:
        ValueError: If per_axis < 1
    """
    if per_axis < 1:
        raise ValueError(f"per_axis must be >= 1, got {per_axis}")
    span = grid.frequency_span
    step = max(1, int(np.floor(span * grid.length / per_axis)))
    ks = (np.arange(per_axis) - (per_axis - 1) / 2) * step
    axis = np.round(ks).astype(int) / grid.length
    mesh = np.meshgrid(*([axis] * grid.dim), indexing="ij")
    points = np.stack([a.reshape(-1) for a in mesh], axis=-1)
    return sorted({tuple(float(v) for v in row) for row in points})
