"""
Trees, i-trees and window partitions
"""
from dataclasses import dataclass, field
from typing import FrozenSet, Tuple

from src.models.cube import DyadicCube
from src.models.tile import SemitileIndex, Tile, TileError, semitile, tile_leq


@dataclass(frozen=True)
class Tree:
    """Tile set lying below an explicit top (the top need not be a member)"""

    tiles: FrozenSet[Tile]
    top: Tile

    def __post_init__(self):
        object.__setattr__(self, "tiles", frozenset(self.tiles))
        for p in self.tiles:
            if not tile_leq(p, self.top):
                raise TileError(f"{p!r} does not lie below the top {self.top!r}")

    @property
    def time(self) -> DyadicCube:
        return self.top.time

    @property
    def freq(self) -> DyadicCube:
        return self.top.freq

    def __len__(self) -> int:
        return len(self.tiles)

    def is_i_tree(self, i: int) -> bool:
        top_semi = semitile(self.top, i)
        return all(semitile(p, i).contains(top_semi) for p in self.tiles)

    def ordered(self) -> Tuple[Tile, ...]:
        return tuple(sorted(self.tiles, key=lambda t: t.sort_key()))


@dataclass(frozen=True)
class ITree:
    """Tree whose members satisfy ω_{T(i)} ⊆ ω_{p(i)}"""

    tree: Tree
    i: int

    def __post_init__(self):
        SemitileIndex(self.i, self.tree.top.dim)
        if not self.tree.is_i_tree(self.i):
            raise TileError(f"tree is not a {self.i}-tree")


@dataclass(frozen=True)
class WindowPartition:
    """Disjoint dyadic cubes J covering a window"""

    window: DyadicCube
    cubes: Tuple[DyadicCube, ...]
    coarsest_scale: int
    empty_tree: bool = False

    def __len__(self) -> int:
        return len(self.cubes)
