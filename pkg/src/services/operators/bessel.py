"""
Bessel Bound

For the trees T_j′ selected by energy pruning, with U = ⋃_j T_j′,

    ‖Σ_{p ∈ U} ⟨f, φ_p⟩ φ_p‖₂² ≤ C ε² Σ_j |I_{T_j}|.

The left side is evaluated on the dual grid by Parseval.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from src.models.tile import Tile
from src.models.tree import Tree
from src.services.operators.coefficients import TileWeights

logger = logging.getLogger(__name__)


@dataclass
class BesselResult:
    lhs_sq: float
    rhs_budget: float
    ratio: float
    tiles: int = 0


def packet_sum_spectrum(tiles: Iterable[Tile], coeffs: TileWeights, phases=None) -> np.ndarray:
    """Spectrum of Σ a_p ⟨f, φ_p⟩ φ_p (a_p = 1 unless phases are given)"""
    spectrum = np.zeros(coeffs.cache.grid.shape, dtype=np.complex128)
    for p in sorted(set(tiles), key=lambda t: t.sort_key()):
        block = coeffs.cache.spectrum(p)
        weight = coeffs[p] if phases is None else phases[p] * coeffs[p]
        spectrum[block.slices] += weight * block.block
    return spectrum


def bessel_check(trees: Sequence[Tree], coeffs: TileWeights, epsilon: float) -> BesselResult:
    """
    Compare ‖Σ_{p ∈ U} ⟨f, φ_p⟩φ_p‖₂² with ε²Σ|I_{T_j}|

    Args:
        trees: Selected r-trees T_j′ (their tops are the tops of T_j)
        coeffs: Coefficients covering U
        epsilon: Energy of the pruned set

    Returns:
        BesselResult with ratio lhs/budget, 0/0 → 0
    """
    union = frozenset().union(*(t.tiles for t in trees)) if trees else frozenset()
    grid = coeffs.cache.grid
    lhs_sq = float(np.sum(np.abs(packet_sum_spectrum(union, coeffs)) ** 2) * grid.length ** (-grid.dim))
    budget = float(epsilon ** 2 * sum(float(t.top.time.volume()) for t in trees))
    if budget > 0:
        ratio = lhs_sq / budget
    else:
        ratio = 0.0 if lhs_sq == 0 else float("inf")
    if not np.isfinite(ratio):
        logger.warning(f"bessel_check: zero budget with ‖·‖² = {lhs_sq:.3e}")
    return BesselResult(lhs_sq, budget, ratio, len(union))
