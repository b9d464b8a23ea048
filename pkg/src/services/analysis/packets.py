"""
Wave Packets

φ_p = M_{c(ω_{p(1)})} T_{c(I_p)} D²_{ℓ} φ with ℓ = |I_p|^{1/n}, synthesized
frequency side from

    φ̂_p(ξ) = |I_p|^{1/2} e^{−2πi c(I_p)·(ξ − c(ω_{p(1)}))} φ̂(ℓ(ξ − c(ω_{p(1)}))),

which is supported in the cube of side |ω_p|^{1/n}/5 around c(ω_{p(1)}).
Because everything is a tensor product, a packet spectrum is stored as a
small dense block on the dual grid; ψ_p^ζ multiplies the block by m(ξ − ζ).

On the torus the inverse DFT of the sampled spectrum is exactly the
L-periodization of the continuum packet (the spectrum sits inside the
span); the distance to the continuum packet is what periodization_error
measures.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from src.models.grid import Grid, GridFunction
from src.models.tile import Tile, semitile
from src.services.analysis.bump import BumpProfile, PhiHat
from src.services.analysis.fourier import inverse_array
from src.services.analysis.multipliers import Multiplier

logger = logging.getLogger(__name__)


class PacketResolutionError(ValueError):
    """Raised when a tile's packet cannot be represented on the grid"""
    pass


@dataclass(frozen=True)
class PacketSpectrum:
    """Dense spectrum block of one packet; starts are indices into the shifted frequency axis"""

    grid: Grid
    starts: Tuple[int, ...]
    factors: Tuple[np.ndarray, ...]

    @property
    def slices(self) -> Tuple[slice, ...]:
        return tuple(slice(s, s + f.size) for s, f in zip(self.starts, self.factors))

    @property
    def block(self) -> np.ndarray:
        out = np.ones((), dtype=np.complex128)
        for j, factor in enumerate(self.factors):
            shape = [1] * len(self.factors)
            shape[j] = factor.size
            out = out * factor.reshape(shape)
        return out

    def frequencies(self) -> np.ndarray:
        """Frequency vectors of the block, shape block.shape + (n,)"""
        axes = []
        N, L = self.grid.points, self.grid.length
        for s, f in zip(self.starts, self.factors):
            axes.append((np.arange(s, s + f.size) - N // 2) / L)
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack(mesh, axis=-1)

    def to_array(self, block: Optional[np.ndarray] = None) -> np.ndarray:
        out = np.zeros(self.grid.shape, dtype=np.complex128)
        out[self.slices] = self.block if block is None else block
        return out

    def pair(self, spectrum: np.ndarray, block: Optional[np.ndarray] = None) -> complex:
        """⟨g, packet⟩ = L^{−n} Σ ĝ · conj(packet̂) over the block"""
        values = self.block if block is None else block
        total = np.sum(spectrum[self.slices] * np.conj(values))
        return complex(total * self.grid.length ** (-self.grid.dim))


def _axis_factor(
    profile: BumpProfile,
    grid: Grid,
    ell: float,
    time_center: float,
    freq_center: float,
    tile: Tile,
) -> Tuple[int, np.ndarray]:
    N, L = grid.points, grid.length
    radius = float(profile.outer) / ell
    k_lo = int(np.ceil((freq_center - radius) * L))
    k_hi = int(np.floor((freq_center + radius) * L))
    if k_lo < -N // 2 or k_hi > N // 2 - 1:
        raise PacketResolutionError(
            f"spectrum of {tile!r} leaves the frequency span ±{grid.frequency_span}"
        )
    xi = np.arange(k_lo, k_hi + 1) / L
    values = (
        np.sqrt(ell)
        * np.exp(-2j * np.pi * time_center * (xi - freq_center))
        * profile.evaluate_1d(ell * (xi - freq_center))
    )
    return k_lo + N // 2, values


def check_representable(p: Tile, grid: Grid):
    """
    Raise PacketResolutionError unless c(I_p) sits on the grid and c(ω_{p(1)}) on (1/L)ℤⁿ

    Both hold iff 2h ≤ ℓ ≤ L/4 for ℓ = 2^scale.
    """
    if p.dim != grid.dim:
        raise PacketResolutionError(f"tile dim {p.dim} does not match grid dim {grid.dim}")
    if p.scale < grid.log2_length - grid.log2_points + 1:
        raise PacketResolutionError(
            f"tile scale {p.scale} is finer than the grid resolution (h = {grid.spacing})"
        )
    if p.scale > grid.log2_length - 2:
        raise PacketResolutionError(
            f"tile scale {p.scale} is too coarse for the box length {grid.length}"
        )


def packet_spectrum(p: Tile, phi_hat: PhiHat) -> PacketSpectrum:
    """Sparse spectrum block of φ_p"""
    grid = phi_hat.grid
    check_representable(p, grid)
    ell = 2.0 ** p.scale
    time_center = [float(c) for c in p.time.center()]
    freq_center = [float(c) for c in semitile(p, 1).center()]
    starts, factors = [], []
    for j in range(p.dim):
        start, values = _axis_factor(phi_hat.profile, grid, ell, time_center[j], freq_center[j], p)
        starts.append(start)
        factors.append(values)
    return PacketSpectrum(grid, tuple(starts), tuple(factors))


def synthesize_phi_p(p: Tile, phi_hat: PhiHat) -> GridFunction:
    """
    Space samples of φ_p

    Raises:
        PacketResolutionError: If the tile is outside the grid's resolution or span
    """
    spectrum = packet_spectrum(p, phi_hat)
    return GridFunction(phi_hat.grid, inverse_array(phi_hat.grid, spectrum.to_array()))


def zeta_in_semitile(p: Tile, zeta: Sequence[float], r: int) -> bool:
    cube = semitile(p, r)
    side = float(cube.side())
    return all(np.floor(z / side) == m for z, m in zip(zeta, cube.corner))


def psi_block(
    spectrum: PacketSpectrum,
    p: Tile,
    zeta: Sequence[float],
    m: Multiplier,
    r: int,
    allow_outside: bool = False,
) -> np.ndarray:
    """
    Block values m(ξ − ζ)·φ̂_p(ξ)

    Raises:
        ValueError: If ζ ∉ ω_{p(r)} and allow_outside is False
        SingularMultiplierError: If ξ = ζ inside the support
    """
    if not allow_outside and not zeta_in_semitile(p, zeta, r):
        raise ValueError(f"ζ = {tuple(zeta)} is not in semitile {r} of {p!r}")
    shifted = spectrum.frequencies() - np.asarray(zeta, dtype=float)
    return m(shifted) * spectrum.block


def synthesize_psi_p_zeta(
    p: Tile,
    zeta: Sequence[float],
    m: Multiplier,
    phi_hat: PhiHat,
    r: int,
    allow_outside: bool = False,
) -> GridFunction:
    """Space samples of ψ_p^ζ, (ψ_p^ζ)̂(ξ) = m(ξ − ζ) φ̂_p(ξ)"""
    spectrum = packet_spectrum(p, phi_hat)
    block = psi_block(spectrum, p, zeta, m, r, allow_outside)
    return GridFunction(phi_hat.grid, inverse_array(phi_hat.grid, spectrum.to_array(block)))


class PacketCache:
    """Lazily built packet spectra keyed by tile; read-only once warmed up"""

    def __init__(self, phi_hat: PhiHat):
        self.phi_hat = phi_hat
        self._spectra: Dict[Tile, PacketSpectrum] = {}

    @property
    def grid(self) -> Grid:
        return self.phi_hat.grid

    def spectrum(self, p: Tile) -> PacketSpectrum:
        cached = self._spectra.get(p)
        if cached is None:
            cached = packet_spectrum(p, self.phi_hat)
            self._spectra[p] = cached
        return cached

    def warm(self, tiles) -> "PacketCache":
        for p in tiles:
            self.spectrum(p)
        return self

    def __len__(self) -> int:
        return len(self._spectra)


def periodic_distance(grid: Grid, center: Sequence[float]) -> np.ndarray:
    """|x − c| on the torus, as a grid-shaped array"""
    L = grid.length
    total = np.zeros(grid.shape)
    for xj, cj in zip(grid.coordinates(), center):
        d = np.mod(xj - cj + L / 2, L) - L / 2
        total = total + d * d
    return np.sqrt(total)


def packet_decay_profile(
    p: Tile,
    zeta: Sequence[float],
    m: Multiplier,
    phi_hat: PhiHat,
    r: int,
    nu: int = 5,
    radius: float = 4.0,
) -> float:
    """
    Measured decay constant of ψ_p^ζ

    sup of |ψ_p^ζ(x)|·|I_p|^{1/2}·(1 + |x − c(I_p)|/ℓ)^ν over grid points within
    radius·ℓ of c(I_p).
    """
    psi = synthesize_psi_p_zeta(p, zeta, m, phi_hat, r)
    ell = 2.0 ** p.scale
    dist = periodic_distance(phi_hat.grid, [float(c) for c in p.time.center()]) / ell
    window = dist <= radius
    weighted = np.abs(psi.samples) * ell ** (p.dim / 2) * (1.0 + dist) ** nu
    return float(np.max(weighted[window]))


def periodization_error(p: Tile, phi_hat: PhiHat, enlargement: int = 2) -> float:
    """
    Relative sup distance between φ_p on the working torus and on a torus
    2^enlargement times longer (same spacing), over the working box

    Per-axis relative errors e_j combine as Π(1 + e_j) − 1.
    """
    grid = phi_hat.grid
    check_representable(p, grid)
    ell = 2.0 ** p.scale
    time_center = [float(c) for c in p.time.center()]
    freq_center = [float(c) for c in semitile(p, 1).center()]
    small = Grid(1, grid.log2_length, grid.log2_points)
    big = Grid(1, grid.log2_length + enlargement, grid.log2_points + enlargement)
    offset = (big.points - small.points) // 2
    total = 1.0
    for j in range(p.dim):
        values = []
        for g in (small, big):
            start, factor = _axis_factor(phi_hat.profile, g, ell, time_center[j], freq_center[j], p)
            spectrum = np.zeros(g.points, dtype=np.complex128)
            spectrum[start:start + factor.size] = factor
            values.append(inverse_array(g, spectrum))
        reference = values[1][offset:offset + small.points]
        err = np.max(np.abs(values[0] - reference)) / np.max(np.abs(reference))
        total *= 1.0 + float(err)
    return total - 1.0
