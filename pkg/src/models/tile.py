"""
Tiles

A tile is a product I_p × ω_p of a dyadic time cube and a dyadic frequency
cube with |I_p|·|ω_p| = 1. Semitiles ω_{p(i)} are numbered 1..2^n by the
lexicographic order of their centers.
"""
from dataclasses import dataclass
from typing import List, Tuple

from src.models.cube import DyadicCube
from src.models.types import DimensionMismatchError


class TileError(ValueError):
    """Raised for malformed tiles, semitile indices or universe parameters"""
    pass


@dataclass(frozen=True)
class SemitileIndex:
    """1-based index of a semitile, i in {1, …, 2^n}"""

    i: int
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise TileError(f"dim must be >= 1, got {self.dim}")
        if not 1 <= self.i <= 2 ** self.dim:
            raise TileError(f"semitile index must lie in 1..{2 ** self.dim}, got {self.i}")

    def bits(self) -> Tuple[int, ...]:
        """Upper/lower half selector per coordinate (1 = upper half)"""
        v = self.i - 1
        return tuple((v >> (self.dim - 1 - j)) & 1 for j in range(self.dim))


@dataclass(frozen=True)
class Tile:
    """Tile I_p × ω_p"""

    time: DyadicCube
    freq: DyadicCube

    def __post_init__(self):
        if self.time.dim != self.freq.dim:
            raise DimensionMismatchError(
                f"time cube has dim {self.time.dim}, frequency cube has dim {self.freq.dim}"
            )
        if self.freq.scale != -self.time.scale:
            raise TileError(
                f"|I_p||ω_p| must be 1: time scale {self.time.scale}, "
                f"frequency scale {self.freq.scale}"
            )

    @classmethod
    def from_indices(cls, scale: int, time_corner, freq_corner) -> "Tile":
        return cls(DyadicCube(scale, tuple(time_corner)), DyadicCube(-scale, tuple(freq_corner)))

    @property
    def dim(self) -> int:
        return self.time.dim

    @property
    def scale(self) -> int:
        return self.time.scale

    def semitile(self, i: int) -> DyadicCube:
        return semitile(self, i)

    def sort_key(self) -> tuple:
        """(scale, time corner, frequency corner): the universe ordering"""
        return (self.scale, self.time.corner, self.freq.corner)

    def __repr__(self) -> str:
        from src.utils.tilecode import format_tile
        return f"Tile({format_tile(self)})"


def semitile(p: Tile, i: int) -> DyadicCube:
    """
    The i-th half-side subcube ω_{p(i)} of ω_p

    Args:
        p: Tile
        i: Index in 1..2^n (lex order of subcube centers)

    Raises:
        TileError: If i is out of range

    Examples:
        For ω_p = [0,1)², i=1 → [0,½)², i=2 → [0,½)×[½,1), i=4 → [½,1)².
    """
    index = SemitileIndex(i, p.dim)
    return p.freq.child(index.bits())


def tile_leq(p: Tile, q: Tile) -> bool:
    """Non-strict tile order: I_p ⊆ I_q and ω_q ⊆ ω_p"""
    if p.dim != q.dim:
        raise DimensionMismatchError(f"dimension mismatch: {p.dim} vs {q.dim}")
    return q.time.contains(p.time) and p.freq.contains(q.freq)


def tiles_intersect(p: Tile, q: Tile) -> bool:
    """Tiles intersect as subsets of R^{2n}"""
    return p.time.intersects(q.time) and p.freq.intersects(q.freq)


def generate_universe(
    n: int,
    k_min: int,
    k_max: int,
    time_box: DyadicCube,
    freq_box: DyadicCube
) -> List[Tile]:
    """
    All tiles with scale in [k_min, k_max] inside time_box × freq_box

    Args:
        n: Dimension
        k_min: Finest time scale
        k_max: Coarsest time scale
        time_box: Dyadic cube holding every I_p
        freq_box: Dyadic cube holding every ω_p

    Returns:
        Tiles ordered by scale, then time corner, then frequency corner

    Raises:
        TileError: If k_min > k_max or a box is smaller than the finest scale

    Examples:
        n=2, k_min=k_max=0, boxes [0,2)² → 16 tiles;
        n=2, k_min=0, k_max=1, boxes [0,2)² → 32 tiles.
    """
    if k_min > k_max:
        raise TileError(f"k_min ({k_min}) must be <= k_max ({k_max})")
    if time_box.dim != n or freq_box.dim != n:
        raise DimensionMismatchError(
            f"boxes must have dim {n}, got {time_box.dim} and {freq_box.dim}"
        )
    if time_box.scale < k_min:
        raise TileError(
            f"time box side 2^{time_box.scale} is smaller than the finest time scale 2^{k_min}"
        )
    if freq_box.scale < -k_max:
        raise TileError(
            f"frequency box side 2^{freq_box.scale} is smaller than the finest "
            f"frequency scale 2^{-k_max}"
        )

    tiles: List[Tile] = []
    for k in range(k_min, k_max + 1):
        if k > time_box.scale or -k > freq_box.scale:
            continue
        freq_cubes = list(freq_box.descendants(-k))
        for time_cube in time_box.descendants(k):
            for freq_cube in freq_cubes:
                tiles.append(Tile(time_cube, freq_cube))
    return tiles
