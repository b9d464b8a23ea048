"""
Oracles

Slow, independent recomputation paths for the quantities the experiments
report. Each one avoids the fast path it checks: tiles are enumerated as
objects instead of order matrices, packets are synthesized in space instead
of paired on spectrum blocks, and transforms are explicit DFT matrices.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.models.cube import DyadicCube
from src.models.grid import DirectionField, Grid, GridFunction, SetIndicator
from src.models.tile import Tile, semitile, tile_leq
from src.services.analysis.bump import PhiHat
from src.services.analysis.fourier import dilate, inverse, modulate, translate
from src.services.analysis.multipliers import Multiplier
from src.services.analysis.packets import synthesize_phi_p, synthesize_psi_p_zeta, zeta_in_semitile
from src.services.analysis.quadrature import inner_product
from src.services.operators.coefficients import TileWeights

logger = logging.getLogger(__name__)


def oracle_mass(
    P: Iterable[Tile],
    E: SetIndicator,
    N: DirectionField,
    universe: Sequence[Tile],
    exponent: Optional[float] = None,
) -> float:
    """ℳ(P) from full-grid masks, one u at a time"""
    P = list(P)
    grid = E.grid
    a = float(10 * grid.dim if exponent is None else exponent)
    coords = grid.coordinates()
    best = 0.0
    for u in universe:
        if not any(tile_leq(p, u) for p in P):
            continue
        region = E.member & N.in_cube(u.freq)
        if not region.any():
            continue
        dist_sq = sum((x - float(c)) ** 2 for x, c in zip(coords, u.time.center()))
        kernel = (1.0 + np.sqrt(dist_sq) / 2.0 ** u.scale) ** (-a)
        value = float(np.sum(np.broadcast_to(kernel, grid.shape)[region]) * grid.cell_volume / float(u.time.volume()))
        best = max(best, value)
    return best


def oracle_energy(P: Iterable[Tile], coeffs: TileWeights, r: int, universe: Sequence[Tile]) -> float:
    """ℰ(P) by enumerating r-trees below every universe top"""
    tiles = list(P)
    best = 0.0
    for t in universe:
        top_semi = semitile(t, r)
        total = sum(
            abs(coeffs[p]) ** 2 for p in tiles
            if tile_leq(p, t) and semitile(p, r).contains(top_semi)
        )
        best = max(best, total / float(t.time.volume()))
    return float(np.sqrt(best))


class SpatialPackets:
    """Space-domain ψ_p^ζ and φ_p, synthesized on demand and memoized"""

    def __init__(self, phi_hat: PhiHat, m: Optional[Multiplier] = None, r: int = 2):
        self.phi_hat = phi_hat
        self.m = m
        self.r = r
        self._psi: Dict[Tuple[Tile, Tuple[float, ...], bool], np.ndarray] = {}
        self._phi: Dict[Tile, GridFunction] = {}

    def psi(self, p: Tile, zeta: Sequence[float], allow_outside: bool = False) -> np.ndarray:
        key = (p, tuple(zeta), allow_outside)
        if key not in self._psi:
            self._psi[key] = synthesize_psi_p_zeta(p, zeta, self.m, self.phi_hat, self.r, allow_outside).samples
        return self._psi[key]

    def phi(self, p: Tile) -> GridFunction:
        if p not in self._phi:
            self._phi[p] = synthesize_phi_p(p, self.phi_hat)
        return self._phi[p]


def oracle_pairings(
    P: Iterable[Tile],
    E: SetIndicator,
    N: DirectionField,
    coeffs: TileWeights,
    m: Multiplier,
    r: int,
) -> Dict[Tile, complex]:
    """⟨1_{E ∩ N⁻¹[ω_{p(r)}]}, ψ_p^N⟩ by spatial quadrature of synthesized packets"""
    grid = E.grid
    packets = SpatialPackets(coeffs.cache.phi_hat, m, r)
    out = {}
    for p in P:
        total = 0j
        for zeta, cells in N.groups(E.member):
            if zeta_in_semitile(p, zeta, r):
                total += complex(np.sum(np.conj(packets.psi(p, zeta)[cells])) * grid.cell_volume)
        out[p] = total
    return out


def oracle_model_sum(
    P: Iterable[Tile],
    E: SetIndicator,
    N: DirectionField,
    coeffs: TileWeights,
    m: Multiplier,
    r: int,
) -> float:
    """Model sum (and tree lhs, over a tree's tiles) from spatial packets"""
    pairings = oracle_pairings(list(P), E, N, coeffs, m, r)
    return float(sum(abs(a) * abs(coeffs[p]) for p, a in pairings.items()))


def oracle_bessel(tiles: Iterable[Tile], coeffs: TileWeights) -> float:
    """‖Σ c_p φ_p‖₂² as the Gram sum Σ_{p,u} c_p conj(c_u) ⟨φ_p, φ_u⟩"""
    packets = SpatialPackets(coeffs.cache.phi_hat)
    ordered = sorted(set(tiles), key=lambda t: t.sort_key())
    total = 0j
    for i, p in enumerate(ordered):
        for u in ordered[i:]:
            gram = inner_product(packets.phi(p), packets.phi(u))
            term = coeffs[p] * np.conj(coeffs[u]) * gram
            total += term if u == p else 2 * term.real
    return float(total.real)


def oracle_b_zeta(coeffs: TileWeights, zeta: Sequence[float], P: Iterable[Tile], m: Multiplier, r: int) -> np.ndarray:
    """B_ζ^r f as a sum of individually synthesized packets"""
    packets = SpatialPackets(coeffs.cache.phi_hat, m, r)
    out = np.zeros(coeffs.cache.grid.shape, dtype=np.complex128)
    for p in P:
        if zeta_in_semitile(p, zeta, r):
            out += coeffs[p] * packets.psi(p, zeta)
    return out


def _dft_matrix(grid: Grid) -> np.ndarray:
    """1-D continuum-normalized DFT: row k, column i = h·e^{−2πi ξ_k x_i}"""
    return np.exp(-2j * np.pi * np.outer(grid.frequency_axis, grid.axis)) * grid.spacing


def _apply_axes(matrix: np.ndarray, values: np.ndarray) -> np.ndarray:
    out = values
    for axis in range(values.ndim):
        out = np.moveaxis(np.tensordot(matrix, out, axes=([1], [axis])), 0, axis)
    return out


def oracle_multiplier_apply(f: GridFunction, m: Multiplier, zeta: Sequence[float]) -> np.ndarray:
    """M_ζ B M_{−ζ} f through explicit DFT matrices"""
    grid = f.grid
    W = _dft_matrix(grid)
    f_hat = _apply_axes(W, f.samples)
    mesh = np.stack(np.meshgrid(*([grid.frequency_axis] * grid.dim), indexing="ij"), axis=-1)
    origin = m.origin if m.origin is not None else 0.0
    product = m(mesh - np.asarray(zeta, dtype=float), origin_value=origin) * f_hat
    return _apply_axes(np.conj(W).T / (grid.spacing * grid.length), product)


def oracle_claim_f2(
    tiles: Iterable[Tile],
    phases: Dict[Tile, complex],
    J: DyadicCube,
    E: SetIndicator,
    N: DirectionField,
    coeffs: TileWeights,
    m: Multiplier,
    r: int,
) -> float:
    """max over x ∈ J of |F_{2J}(x)|, rebuilding the active tile set point by point"""
    grid = E.grid
    slices = grid.cube_slices(J)
    if slices is None:
        return 0.0
    large = [p for p in tiles if p.scale > J.scale + 1]
    packets = SpatialPackets(coeffs.cache.phi_hat, m, r)
    inside = np.zeros(grid.shape, dtype=bool)
    inside[slices] = True
    best = 0.0
    for index in zip(*np.nonzero(inside & E.member)):
        zeta = tuple(float(v) for v in N.value[index])
        value = sum(
            phases[p] * coeffs[p] * packets.psi(p, zeta)[index]
            for p in large if zeta_in_semitile(p, zeta, r)
        )
        best = max(best, abs(value))
    return float(best)


@dataclass
class PacketContracts:
    norm_spread: float
    max_disjoint_overlap: float
    structure_error: float
    checked_pairs: int
    checked_structure: int


def verify_packet_contracts(phi_hat: PhiHat, tiles: Sequence[Tile], seed: int, pairs: int = 100) -> PacketContracts:
    """
    Global packet checks over a tile sample

    - relative spread of ‖φ_p‖₂ among same-scale tiles
    - max |⟨φ_p, φ_q⟩|/(‖φ_p‖‖φ_q‖) over pairs with disjoint (1/5)ω_{(1)} supports
    - max relative sup difference between φ_p and M_{c(ω_{p(1)})} T_{c(I_p)} D_ℓ φ,
      over tiles with ℓ ≥ 1 where the dilation is an exact spectrum subsampling
    """
    rng = np.random.default_rng(seed)
    packets = SpatialPackets(phi_hat)
    norms: Dict[int, List[float]] = {}
    for p in tiles:
        norms.setdefault(p.scale, []).append(packets.phi(p).norm())
    spread = 0.0
    for values in norms.values():
        spread = max(spread, (max(values) - min(values)) / max(values))

    overlap, checked = 0.0, 0
    if len(tiles) >= 2:
        for _ in range(pairs):
            i, j = rng.choice(len(tiles), size=2, replace=False)
            p, q = tiles[i], tiles[j]
            if not _disjoint_supports(p, q):
                continue
            a, b = packets.phi(p), packets.phi(q)
            overlap = max(overlap, abs(inner_product(a, b)) / (a.norm() * b.norm()))
            checked += 1

    mother = inverse(phi_hat)
    structure, structured = 0.0, 0
    for p in tiles:
        if p.scale < 0:
            continue
        built = modulate(
            translate(dilate(mother, p.scale), [float(c) for c in p.time.center()]),
            [float(c) for c in semitile(p, 1).center()],
        )
        reference = packets.phi(p).samples
        structure = max(structure, float(np.max(np.abs(built.samples - reference)) / np.max(np.abs(reference))))
        structured += 1
    if structured == 0:
        logger.warning("verify_packet_contracts: no tile with scale >= 0, structure check skipped")
    return PacketContracts(spread, overlap, structure, checked, structured)


def _disjoint_supports(p: Tile, q: Tile) -> bool:
    """Open supports of φ̂_p, φ̂_q (cubes of half-side |ω|/10 about c(ω_{(1)})) are disjoint"""
    for cp, cq, sp, sq in zip(
        semitile(p, 1).center(), semitile(q, 1).center(), [p.freq.side()] * p.dim, [q.freq.side()] * q.dim
    ):
        if abs(cp - cq) >= (sp + sq) / 10:
            return True
    return False
