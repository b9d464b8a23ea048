"""
Sampling Grids

Uniform periodic grids over the centered box [−L/2, L/2)ⁿ and the sampled
objects living on them: grid functions, set indicators and direction fields.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Literal, Optional, Tuple

import numpy as np

from src.models.cube import Box, DyadicCube

Domain = Literal["space", "frequency"]


class GridError(ValueError):
    """Raised for malformed grids or mismatched grid objects"""
    pass


@dataclass(frozen=True)
class Grid:
    """
    Periodic grid with L = 2^log2_length and 2^log2_points points per axis

    Space samples sit at x_i = −L/2 + i·h, i = 0..N−1, h = L/N; the dual
    frequency grid is k/L for k = −N/2..N/2−1.
    """

    dim: int
    log2_length: int
    log2_points: int

    def __post_init__(self):
        if self.dim < 1:
            raise GridError(f"dim must be >= 1, got {self.dim}")
        if self.log2_points < 1:
            raise GridError(f"log2_points must be >= 1, got {self.log2_points}")

    @property
    def length(self) -> float:
        return float(2.0 ** self.log2_length)

    @property
    def points(self) -> int:
        return 1 << self.log2_points

    @property
    def spacing(self) -> float:
        return float(2.0 ** (self.log2_length - self.log2_points))

    @property
    def spacing_exact(self) -> Fraction:
        return Fraction(2) ** (self.log2_length - self.log2_points)

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dim

    @property
    def frequency_span(self) -> float:
        """Half-width N/(2L) of the frequency grid [−N/2L, N/2L)"""
        return self.points / (2.0 * self.length)

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.points,) * self.dim

    @cached_property
    def axis(self) -> np.ndarray:
        return -self.length / 2 + np.arange(self.points) * self.spacing

    @cached_property
    def frequency_axis(self) -> np.ndarray:
        return np.arange(-self.points // 2, self.points // 2) / self.length

    @cached_property
    def frequency_index(self) -> np.ndarray:
        return np.arange(-self.points // 2, self.points // 2)

    def coordinates(self) -> Tuple[np.ndarray, ...]:
        """Per-axis coordinate arrays broadcastable to the grid shape"""
        return _broadcast_axes(self.axis, self.dim)

    def frequencies(self) -> Tuple[np.ndarray, ...]:
        return _broadcast_axes(self.frequency_axis, self.dim)

    def space_box(self) -> Box:
        half = Fraction(2) ** (self.log2_length - 1)
        return Box((-half,) * self.dim, (half,) * self.dim)

    def cube_slices(self, cube: DyadicCube) -> Optional[Tuple[slice, ...]]:
        """
        Index slices of the grid points inside a dyadic cube

        Returns None when the cube misses the grid box. The cube side must
        be a multiple of h.
        """
        return self._box_slices(cube.lower(), cube.upper(), closed=False)

    def box_slices(self, box: Box) -> Optional[Tuple[slice, ...]]:
        """Index slices of grid points inside a closed box"""
        return self._box_slices(box.lo, box.hi, closed=True)

    def _box_slices(self, lo, hi, closed: bool):
        h = self.spacing_exact
        origin = -Fraction(2) ** (self.log2_length - 1)
        slices = []
        for a, b in zip(lo, hi):
            # first index with x >= a, last index with x < b (or <= b when closed)
            start = _ceil((Fraction(a) - origin) / h)
            stop_val = (Fraction(b) - origin) / h
            stop = _floor(stop_val) + 1 if closed else _ceil(stop_val)
            start, stop = max(start, 0), min(stop, self.points)
            if start >= stop:
                return None
            slices.append(slice(start, stop))
        return tuple(slices)

    def point(self, index: Tuple[int, ...]) -> Tuple[float, ...]:
        return tuple(float(self.axis[i]) for i in index)

    def describe(self) -> dict:
        return {
            "dim": self.dim,
            "L": self.length,
            "s": self.log2_points,
            "h": self.spacing,
        }


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _broadcast_axes(axis: np.ndarray, dim: int) -> Tuple[np.ndarray, ...]:
    out = []
    for j in range(dim):
        shape = [1] * dim
        shape[j] = axis.size
        out.append(axis.reshape(shape))
    return tuple(out)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class GridFunction:
    """Complex samples on a grid, either in space or on the dual frequency grid"""

    grid: Grid
    samples: np.ndarray
    domain: Domain = "space"

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.complex128)
        if samples.shape != self.grid.shape:
            raise GridError(f"samples have shape {samples.shape}, grid expects {self.grid.shape}")
        object.__setattr__(self, "samples", _frozen(samples))

    @classmethod
    def zeros(cls, grid: Grid, domain: Domain = "space") -> "GridFunction":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128), domain)

    def _weight(self) -> float:
        # Σ|v|² hⁿ in space; Σ|v|² L^{-n} on the frequency grid
        if self.domain == "space":
            return self.grid.cell_volume
        return self.grid.length ** (-self.grid.dim)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self._weight()))

    def abs(self) -> np.ndarray:
        return np.abs(self.samples)

    def scaled(self, factor: complex) -> "GridFunction":
        return GridFunction(self.grid, self.samples * factor, self.domain)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        check_compatible(self, other)
        return GridFunction(self.grid, self.samples + other.samples, self.domain)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        check_compatible(self, other)
        return GridFunction(self.grid, self.samples - other.samples, self.domain)


def check_compatible(f: GridFunction, g: GridFunction):
    if f.grid != g.grid:
        raise GridError(f"grid mismatch: {f.grid} vs {g.grid}")
    if f.domain != g.domain:
        raise GridError(f"domain mismatch: {f.domain} vs {g.domain}")


@dataclass(frozen=True)
class SetIndicator:
    """Grid-resolved measurable set E (one boolean per grid cell)"""

    grid: Grid
    member: np.ndarray

    def __post_init__(self):
        member = np.asarray(self.member, dtype=bool)
        if member.shape != self.grid.shape:
            raise GridError(f"mask has shape {member.shape}, grid expects {self.grid.shape}")
        object.__setattr__(self, "member", _frozen(member))

    @classmethod
    def empty(cls, grid: Grid) -> "SetIndicator":
        return cls(grid, np.zeros(grid.shape, dtype=bool))

    @classmethod
    def from_cube(cls, grid: Grid, cube: DyadicCube) -> "SetIndicator":
        mask = np.zeros(grid.shape, dtype=bool)
        slices = grid.cube_slices(cube)
        if slices is not None:
            mask[slices] = True
        return cls(grid, mask)

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.member))

    @property
    def measure(self) -> float:
        return self.count * self.grid.cell_volume


@dataclass(frozen=True)
class DirectionField:
    """Piecewise-constant frequency-valued function N(x), shape grid.shape + (n,)"""

    grid: Grid
    value: np.ndarray

    def __post_init__(self):
        value = np.asarray(self.value, dtype=np.float64)
        if value.shape != self.grid.shape + (self.grid.dim,):
            raise GridError(
                f"direction field has shape {value.shape}, expected {self.grid.shape + (self.grid.dim,)}"
            )
        if not np.all(np.isfinite(value)):
            raise GridError("direction field must be finite everywhere")
        object.__setattr__(self, "value", _frozen(value))

    @classmethod
    def constant(cls, grid: Grid, zeta) -> "DirectionField":
        zeta = np.asarray(zeta, dtype=np.float64)
        if zeta.shape != (grid.dim,):
            raise GridError(f"constant direction must have {grid.dim} components, got {zeta.shape}")
        return cls(grid, np.broadcast_to(zeta, grid.shape + (grid.dim,)).copy())

    def in_cube(self, cube: DyadicCube) -> np.ndarray:
        """Boolean mask of cells with N(x) ∈ cube (half-open, exact for dyadic values)"""
        side = float(cube.side())
        mask = np.ones(self.grid.shape, dtype=bool)
        for j, m in enumerate(cube.corner):
            mask &= np.floor(self.value[..., j] / side) == m
        return mask

    def groups(self, mask: Optional[np.ndarray] = None):
        """
        Group cells by their constant N value

        Returns:
            List of (zeta, cell_mask) pairs in lexicographic order of zeta
        """
        flat = self.value.reshape(-1, self.grid.dim)
        selected = np.ones(flat.shape[0], dtype=bool) if mask is None else mask.reshape(-1)
        if not selected.any():
            return []
        values, inverse = np.unique(flat[selected], axis=0, return_inverse=True)
        inverse = np.asarray(inverse).reshape(-1)
        positions = np.flatnonzero(selected)
        out = []
        for g, zeta in enumerate(values):
            cells = np.zeros(flat.shape[0], dtype=bool)
            cells[positions[inverse == g]] = True
            out.append((tuple(float(z) for z in zeta), cells.reshape(self.grid.shape)))
        return out
