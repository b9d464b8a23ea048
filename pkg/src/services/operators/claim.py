"""
Pointwise Control on a Partition Cube

For a cube J of the window partition and x ∈ J, the r-tree part T₂ of a tree
contributes

    F_{2J}(x) = Σ_{p ∈ T₂, |I_p| > 2ⁿ|J|} α_p ⟨f, φ_p⟩ ψ_p^{N(x)}(x) 1_{E_rp}(x),

which is dominated by the dyadic maximal averages over cubes I ⊇ J of

    G₁ = Σ_{p ∈ T₂} α_p ⟨f, φ_p⟩ ψ_p^{ξ₀},   G₂ = Σ_{p ∈ T₂} α_p ⟨f, φ_p⟩ φ_p

with ξ₀ the center of ω_T.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from src.models.cube import DyadicCube
from src.services.analysis.fourier import inverse_array
from src.services.analysis.packets import psi_block
from src.services.analysis.quadrature import dyadic_maximal
from src.services.combinatorics.trees import rtree_part
from src.services.operators.bessel import packet_sum_spectrum
from src.services.operators.tree_inequality import (
    TreeField,
    TreeInequalityInput,
    large_tiles,
    tree_partition,
)

logger = logging.getLogger(__name__)


@dataclass
class Claim1Result:
    J: DyadicCube
    lhs: float
    g1_average: float
    g2_average: float
    rhs: float
    ratio: float
    g1_cube: Optional[DyadicCube] = None
    g2_cube: Optional[DyadicCube] = None


def xi_zero(inp: TreeInequalityInput) -> Tuple[float, ...]:
    return tuple(float(c) for c in inp.tree.top.freq.center())


class ClaimFields:
    """F pieces of the tree plus the two comparison functions G₁, G₂"""

    def __init__(self, inp: TreeInequalityInput, field_: Optional[TreeField] = None):
        self.inp = inp
        self.field = field_ if field_ is not None else TreeField(inp)
        self.grid = self.field.grid
        self.t2 = sorted(rtree_part(inp.tree, inp.r).tiles, key=lambda t: t.sort_key())
        zeta = xi_zero(inp)
        g1 = np.zeros(self.grid.shape, dtype=np.complex128)
        for p in self.t2:
            block = inp.coeffs.cache.spectrum(p)
            weight = self.field.phases[p] * inp.coeffs[p]
            g1[block.slices] += weight * psi_block(block, p, zeta, inp.m, inp.r, allow_outside=True)
        self.g1 = np.abs(inverse_array(self.grid, g1))
        phases = {p: self.field.phases[p] for p in self.t2}
        self.g2 = np.abs(inverse_array(self.grid, packet_sum_spectrum(self.t2, inp.coeffs, phases)))

    def f2(self, J: DyadicCube) -> np.ndarray:
        return self.field.combined(large_tiles(self.t2, J))


def claim1_check(inp: TreeInequalityInput, J: DyadicCube, fields: Optional[ClaimFields] = None) -> Claim1Result:
    """
    max_{x ∈ J} |F_{2J}(x)| against the sum of the dyadic maximal averages of |G₁|, |G₂|

    Returns:
        Claim1Result; lhs is 0 when J holds no grid point or T₂ has no large tile
    """
    fields = fields if fields is not None else ClaimFields(inp)
    slices = fields.grid.cube_slices(J)
    lhs = 0.0
    if slices is not None and fields.t2:
        lhs = float(np.max(np.abs(fields.f2(J)[slices])))
    a1, c1 = dyadic_maximal(fields.g1, fields.grid, J, inp.window)
    a2, c2 = dyadic_maximal(fields.g2, fields.grid, J, inp.window)
    rhs = a1 + a2
    if rhs > 0:
        ratio = lhs / rhs
    else:
        ratio = 0.0 if lhs == 0 else float("inf")
    return Claim1Result(J, lhs, a1, a2, rhs, ratio, c1, c2)


def claim1_sweep(inp: TreeInequalityInput) -> List[Claim1Result]:
    """Claim check on every cube of the window partition"""
    fields = ClaimFields(inp)
    results = [claim1_check(inp, J, fields) for J in tree_partition(inp).cubes]
    if results:
        worst = max(results, key=lambda res: res.ratio)
        logger.debug(f"claim1_sweep: {len(results)} cubes, max ratio {worst.ratio:.4g} at {worst.J}")
    return results
