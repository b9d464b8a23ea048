"""
Tree Inequality

For a tree T the sum Σ_{p ∈ T} |⟨1_{E_rp}, ψ_p^N⟩⟨φ_p, f⟩|, with
E_rp = E ∩ N⁻¹[ω_{p(r)}], is rewritten with phases α_p of modulus one as
∫ Σ α_p ⟨f, φ_p⟩ ψ_p^N 1_{E_rp} and bounded through the window partition by

    K₁ = Σ_J Σ_{|I_p| ≤ 2ⁿ|J|} ‖⟨f, φ_p⟩ ψ_p^N 1_{E_rp}‖_{L¹(J)}
    K₂ = Σ_J ‖Σ_{|I_p| > 2ⁿ|J|} α_p ⟨f, φ_p⟩ ψ_p^N 1_{E_rp}‖_{L¹(J)}

plus the part of the integrand outside the window. The check reports all
of these next to |I_T|·ℰ(T)·ℳ(T).
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from src.models.cube import DyadicCube
from src.models.grid import DirectionField, SetIndicator
from src.models.tile import Tile, TileError
from src.models.tree import Tree, WindowPartition
from src.services.analysis.fourier import inverse_array
from src.services.analysis.multipliers import Multiplier
from src.services.analysis.packets import psi_block
from src.services.combinatorics.partition import counting_lemma_sum, j_partition
from src.services.combinatorics.trees import rtree_part
from src.services.functionals.energy import energy
from src.services.functionals.mass import MassTable
from src.services.functionals.measures import g_j_measure
from src.services.operators.coefficients import TileWeights
from src.services.operators.dyadic_sum import active_tiles

logger = logging.getLogger(__name__)

PHASE_TOLERANCE = 1e-12


@dataclass
class TreeInequalityInput:
    """
    Args:
        tree: The tree T
        E, N: Set and direction field
        coeffs: ⟨f, φ_p⟩ covering the tree
        m: Multiplier
        r: Semitile index of E_rp
        window: Dyadic cube holding every I_p; the partition is truncated to it
        phases: α_p per tile (default: the phases that turn the sum into an integral)
        coarsest_scale: Cap of the window partition (default: the window scale)
    """

    tree: Tree
    E: SetIndicator
    N: DirectionField
    coeffs: TileWeights
    m: Multiplier
    r: int
    window: DyadicCube
    phases: Optional[Dict[Tile, complex]] = None
    coarsest_scale: Optional[int] = None

    def __post_init__(self):
        if self.phases is not None:
            for p, alpha in self.phases.items():
                if abs(abs(alpha) - 1.0) > PHASE_TOLERANCE:
                    raise ValueError(f"phase of {p!r} has modulus {abs(alpha)}, expected 1")
        if self.coarsest_scale is None:
            self.coarsest_scale = self.window.scale


class TreeField:
    """
    Per-tile pieces g_p = ⟨f, φ_p⟩ ψ_p^N 1_{E_rp} on the grid, and the phases

    One inverse transform per (tile, level set of N) pair.
    """

    def __init__(self, inp: TreeInequalityInput):
        self.inp = inp
        self.grid = inp.coeffs.cache.grid
        self.tiles = inp.tree.ordered()
        self.pieces: Dict[Tile, np.ndarray] = {p: np.zeros(self.grid.shape, dtype=np.complex128) for p in self.tiles}
        for zeta, cells in inp.N.groups(inp.E.member):
            for p in active_tiles(self.tiles, zeta, inp.r):
                block = inp.coeffs.cache.spectrum(p)
                values = inverse_array(self.grid, block.to_array(inp.coeffs[p] * psi_block(block, p, zeta, inp.m, inp.r)))
                self.pieces[p][cells] = values[cells]
        self.integrals = {p: complex(np.sum(g) * self.grid.cell_volume) for p, g in self.pieces.items()}
        if inp.phases is None:
            self.phases = {p: _unit_phase(v) for p, v in self.integrals.items()}
        else:
            missing = [p for p in self.tiles if p not in inp.phases]
            if missing:
                raise TileError(f"no phase for {missing[0]!r}")
            self.phases = dict(inp.phases)

    def combined(self, tiles) -> np.ndarray:
        out = np.zeros(self.grid.shape, dtype=np.complex128)
        for p in tiles:
            out += self.phases[p] * self.pieces[p]
        return out

    def window_mask(self) -> np.ndarray:
        mask = np.zeros(self.grid.shape, dtype=bool)
        slices = self.grid.cube_slices(self.inp.window)
        if slices is not None:
            mask[slices] = True
        return mask


def _unit_phase(value: complex) -> complex:
    """conj(value/|value|), or 1 for value = 0"""
    size = abs(value)
    return complex(np.conj(value) / size) if size > 0 else 1 + 0j


def _large(p: Tile, J: DyadicCube) -> bool:
    """|I_p| > 2ⁿ|J|"""
    return p.scale > J.scale + 1


@dataclass
class TreeInequalityResult:
    lhs: float
    integrand_l1: float
    k1: float
    k2: float
    truncation: float
    area: float
    energy: float
    mass: float
    ratio: float
    counting: float = 0.0
    partition_size: int = 0
    empty_partition: bool = False
    chain_ok: bool = True
    f1: Dict[str, float] = field(default_factory=dict)

    @property
    def rhs_factors(self):
        return (self.area, self.energy, self.mass)


def _ratio(lhs: float, rhs: float) -> float:
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs == 0 else float("inf")


def f1_split(field_: TreeField, partition: WindowPartition, table: MassTable, epsilon: float, mu: float) -> Dict[str, float]:
    """
    Σ_J ‖F_{1J}‖_{L¹(J)} for the non-r-tree part T₁ against ε·Σ_J |G_J|

    Returns:
        {"l1": …, "budget": …, "ratio": …, "max_cube_ratio": …}
    """
    inp = field_.inp
    grid = field_.grid
    t2 = rtree_part(inp.tree, inp.r).tiles
    t1 = [p for p in field_.tiles if p not in t2]
    total, budget, worst = 0.0, 0.0, 0.0
    for J in partition.cubes:
        large = [p for p in t1 if _large(p, J)]
        if not large:
            continue
        slices = grid.cube_slices(J)
        if slices is None:
            continue
        l1 = float(np.sum(np.abs(field_.combined(large)[slices])) * grid.cell_volume)
        gj = g_j_measure(inp.tree, J, inp.E, inp.N, mu, inp.r).measure
        total += l1
        budget += epsilon * gj
        worst = max(worst, _ratio(l1, epsilon * gj))
    return {"l1": total, "budget": budget, "ratio": _ratio(total, budget), "max_cube_ratio": worst}


def tree_inequality_check(inp: TreeInequalityInput, table: MassTable, tolerance: float = 1e-9) -> TreeInequalityResult:
    """
    Evaluate the tree inequality for one tree

    Args:
        inp: Tree, sets, coefficients and window
        table: Mass table (its universe also supplies the energy tops)
        tolerance: Slack allowed in the lhs ≤ ‖F‖₁ ≤ K₁ + K₂ + truncation chain

    Returns:
        TreeInequalityResult with ratio lhs/(|I_T|ℰ(T)ℳ(T)), 0/0 → 0
    """
    T = inp.tree
    area = float(T.top.time.volume())
    if not T.tiles:
        return TreeInequalityResult(0.0, 0.0, 0.0, 0.0, 0.0, area, 0.0, 0.0, 0.0, empty_partition=True)

    field_ = TreeField(inp)
    grid = field_.grid
    lhs = float(sum(abs(v) for v in field_.integrals.values()))
    F = field_.combined(field_.tiles)
    integrand_l1 = float(np.sum(np.abs(F)) * grid.cell_volume)
    inside = field_.window_mask()
    truncation = float(np.sum(np.abs(F[~inside])) * grid.cell_volume)

    partition = j_partition(T, inp.window, inp.coarsest_scale)
    k1 = k2 = 0.0
    for J in partition.cubes:
        slices = grid.cube_slices(J)
        if slices is None:
            continue
        small = [p for p in field_.tiles if not _large(p, J)]
        large = [p for p in field_.tiles if _large(p, J)]
        for p in small:
            k1 += float(np.sum(np.abs(field_.pieces[p][slices])) * grid.cell_volume)
        if large:
            k2 += float(np.sum(np.abs(field_.combined(large)[slices])) * grid.cell_volume)

    eps = energy(T.tiles, inp.coeffs, inp.r, table.universe).value
    mu = table.of(T.tiles).value
    slack = tolerance * max(1.0, integrand_l1)
    chain_ok = lhs <= integrand_l1 + slack and integrand_l1 <= k1 + k2 + truncation + slack
    if not chain_ok:
        logger.warning(
            f"tree chain broken: lhs={lhs:.6g}, ‖F‖₁={integrand_l1:.6g}, K₁+K₂+trunc={k1 + k2 + truncation:.6g}"
        )
    counting, _ = counting_lemma_sum(T, partition)
    return TreeInequalityResult(
        lhs=lhs,
        integrand_l1=integrand_l1,
        k1=k1,
        k2=k2,
        truncation=truncation,
        area=area,
        energy=eps,
        mass=mu,
        ratio=_ratio(lhs, area * eps * mu),
        counting=counting,
        partition_size=len(partition),
        empty_partition=partition.empty_tree,
        chain_ok=chain_ok,
        f1=f1_split(field_, partition, table, eps, mu),
    )


def tree_partition(inp: TreeInequalityInput) -> WindowPartition:
    return j_partition(inp.tree, inp.window, inp.coarsest_scale)


def large_tiles(tiles: List[Tile], J: DyadicCube) -> List[Tile]:
    return [p for p in tiles if _large(p, J)]
