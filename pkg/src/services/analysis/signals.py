"""
Random Test Functions

Deterministic, L²-normalized inputs f for the experiments.
"""
import logging
from typing import Literal, Optional

import numpy as np

from src.models.grid import Grid, GridFunction
from src.models.tile import Tile
from src.services.analysis.bump import BumpProfile, build_phi_hat
from src.services.analysis.fourier import forward_array, inverse_array
from src.services.analysis.packets import packet_spectrum

logger = logging.getLogger(__name__)

TestFunctionKind = Literal["gaussian-packet", "random-wavepacket-combo", "smooth-noise"]
KINDS = ("gaussian-packet", "random-wavepacket-combo", "smooth-noise")


class PeriodizationError(ValueError):
    """Raised when a test function does not decay inside the box"""
    pass


def _normalized(grid: Grid, values: np.ndarray) -> GridFunction:
    norm = np.sqrt(np.sum(np.abs(values) ** 2) * grid.cell_volume)
    if norm == 0:
        raise ValueError("cannot normalize the zero function")
    return GridFunction(grid, values / norm)


def gaussian_tail_fraction(grid: Grid, width: float, center: float, enlargement: int = 2) -> float:
    """
    Fraction of the L² mass of exp(−π(x−c)²/w²) lying outside the box

    Summed directly on a line 2^enlargement times longer with the grid spacing.
    """
    length = grid.length * (1 << enlargement)
    x = -length / 2 + np.arange(grid.points << enlargement) * grid.spacing
    weight = np.exp(-2 * np.pi * (x - center) ** 2 / width ** 2)
    inside = (x >= -grid.length / 2) & (x < grid.length / 2)
    total = np.sum(weight)
    return float(np.sum(weight[~inside]) / total) if total > 0 else 1.0


def gaussian_packet(
    grid: Grid,
    width: float,
    center,
    frequency,
    tolerance: float = 1e-6,
) -> GridFunction:
    """
    Normalized modulated Gaussian e^{2πi η·x} exp(−π|x − c|²/w²)

    Raises:
        PeriodizationError: If the mass outside the box exceeds tolerance
    """
    tail = 1.0
    for cj in center:
        tail *= 1.0 - gaussian_tail_fraction(grid, width, float(cj))
    tail = 1.0 - tail
    if tail > tolerance:
        raise PeriodizationError(
            f"gaussian of width {width} leaks {tail:.3e} of its mass outside the box of side {grid.length}"
        )
    values = np.ones(grid.shape, dtype=np.complex128)
    for xj, cj, ej in zip(grid.coordinates(), center, frequency):
        values = values * np.exp(-np.pi * (xj - cj) ** 2 / width ** 2) * np.exp(2j * np.pi * ej * xj)
    return _normalized(grid, values)


def random_test_function(
    kind: str,
    seed: int,
    grid: Grid,
    width: Optional[float] = None,
) -> GridFunction:
    """
    Deterministic random input with ‖f‖₂ = 1

    Args:
        kind: "gaussian-packet", "random-wavepacket-combo" or "smooth-noise"
        seed: Seed for numpy's default_rng
        grid: Sampling grid
        width: Gaussian width override (gaussian-packet only)

    Raises:
        ValueError: If kind is unknown
        PeriodizationError: If a gaussian packet is too wide for the box
    """
    if kind not in KINDS:
        raise ValueError(f"Unknown test function kind: {kind}")
    rng = np.random.default_rng(seed)
    L, span = grid.length, grid.frequency_span

    if kind == "gaussian-packet":
        if width is None:
            width = float(rng.uniform(4 * grid.spacing, L / 16))
        center = rng.uniform(-L / 8, L / 8, size=grid.dim)
        frequency = rng.uniform(-span / 2, span / 2, size=grid.dim)
        return gaussian_packet(grid, width, center, frequency)

    if kind == "random-wavepacket-combo":
        phi_hat = build_phi_hat(BumpProfile(), grid)
        h_log2 = grid.log2_length - grid.log2_points
        scales = list(range(h_log2 + 3, grid.log2_length - 3))
        if not scales:
            scales = [h_log2 + 1]
        spectrum = np.zeros(grid.shape, dtype=np.complex128)
        placed = 0
        for _ in range(64):
            if placed >= 8:
                break
            k = int(rng.choice(scales))
            side = 2.0 ** k
            reach = int(L / (4 * side))
            time_corner = tuple(int(v) for v in rng.integers(-reach, max(reach, 1), size=grid.dim))
            freq_reach = int(span * side / 2)
            freq_corner = tuple(int(v) for v in rng.integers(-freq_reach, max(freq_reach, 1), size=grid.dim))
            tile = Tile.from_indices(k, time_corner, freq_corner)
            try:
                block = packet_spectrum(tile, phi_hat)
            except ValueError:
                continue
            coefficient = complex(rng.normal(), rng.normal())
            spectrum[block.slices] += coefficient * block.block
            placed += 1
        if placed == 0:
            raise ValueError("no wave packet fits this grid")
        return _normalized(grid, inverse_array(grid, spectrum))

    noise = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    spectrum = forward_array(grid, noise)
    radius_sq = sum(xi ** 2 for xi in grid.frequencies())
    cutoff = span / 4
    spectrum = spectrum * np.exp(-radius_sq / (2 * cutoff ** 2))
    return _normalized(grid, inverse_array(grid, spectrum))
