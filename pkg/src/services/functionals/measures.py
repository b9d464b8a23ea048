"""
E_{rp} sets and G_J measures
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.models.cube import DyadicCube
from src.models.grid import DirectionField, GridError, SetIndicator
from src.models.tile import Tile, semitile
from src.models.tree import Tree

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GJMeasure:
    measure: float
    ratio: float
    inconsistent: bool = False


def e_set(p: Tile, E: SetIndicator, N: DirectionField, r: int) -> SetIndicator:
    """E ∩ N⁻¹[ω_{p(r)}]"""
    if E.grid != N.grid:
        raise GridError("E and N must share one grid")
    return SetIndicator(E.grid, E.member & N.in_cube(semitile(p, r)))


def g_j_set(T: Tree, J: DyadicCube, E: SetIndicator, N: DirectionField, r: Optional[int] = None) -> SetIndicator:
    """J ∩ ⋃ E_{rp} over members with |I_p| > 2ⁿ|J| (r defaults to 2ⁿ)"""
    grid = E.grid
    r = 2 ** grid.dim if r is None else r
    union = np.zeros(grid.shape, dtype=bool)
    for p in T.tiles:
        if p.scale > J.scale + 1:
            union |= e_set(p, E, N, r).member
    inside = np.zeros(grid.shape, dtype=bool)
    slices = grid.cube_slices(J)
    if slices is not None:
        inside[slices] = True
    return SetIndicator(grid, union & inside)


def g_j_measure(
    T: Tree,
    J: DyadicCube,
    E: SetIndicator,
    N: DirectionField,
    mu: float,
    r: Optional[int] = None,
) -> GJMeasure:
    """
    |G_J| and the ratio |G_J|/(μ|J|)

    μ = 0 with positive measure is flagged as inconsistent (ratio = inf).
    """
    measure = g_j_set(T, J, E, N, r).measure
    if mu > 0:
        return GJMeasure(measure, measure / (mu * float(J.volume())))
    if measure > 0:
        logger.warning(f"G_J has measure {measure} while the mass is 0")
        return GJMeasure(measure, float("inf"), inconsistent=True)
    return GJMeasure(0.0, 0.0)
