"""
Domain Models
"""
from src.models.cube import Box, DyadicCube
from src.models.grid import DirectionField, Grid, GridError, GridFunction, SetIndicator
from src.models.tile import SemitileIndex, Tile, TileError, semitile, tile_leq, tiles_intersect
from src.models.tree import ITree, Tree, WindowPartition
from src.models.types import DimensionMismatchError, InequalityCheck, Ordering

__all__ = [
    "Box",
    "DyadicCube",
    "Grid",
    "GridError",
    "GridFunction",
    "SetIndicator",
    "DirectionField",
    "SemitileIndex",
    "Tile",
    "TileError",
    "semitile",
    "tile_leq",
    "tiles_intersect",
    "Tree",
    "ITree",
    "WindowPartition",
    "DimensionMismatchError",
    "InequalityCheck",
    "Ordering",
]
