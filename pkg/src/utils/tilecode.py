"""
Tile Text Codec

Compact text form "k:(m1,…,mn)|κ:(l1,…,ln)" for tiles used in reports.
"""
import re
from typing import Tuple

from src.models.cube import DyadicCube


class TileCodecError(ValueError):
    """Raised when a cube or tile string cannot be parsed"""
    pass


_CUBE_RE = re.compile(r"^\s*(-?\d+)\s*:\s*\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*,?\s*\)\s*$")


def format_cube(cube: DyadicCube) -> str:
    """
    Format a dyadic cube as "k:(m1,…,mn)"

    Examples:
        >>> format_cube(DyadicCube(0, (1, 2)))
        '0:(1,2)'
    """
    return f"{cube.scale}:({','.join(str(m) for m in cube.corner)})"


def parse_cube(text: str) -> DyadicCube:
    """
    Parse "k:(m1,…,mn)" into a DyadicCube

    Raises:
        TileCodecError: If the text is malformed
    """
    match = _CUBE_RE.match(text)
    if not match:
        raise TileCodecError(f"Invalid cube format: {text!r}")
    scale = int(match.group(1))
    corner = tuple(int(part) for part in match.group(2).split(","))
    return DyadicCube(scale, corner)


def format_tile(tile) -> str:
    """
    Format a tile as "k:(m…)|κ:(l…)"

    Examples:
        >>> format_tile(Tile.from_indices(1, (0, 0), (3, 1)))
        '1:(0,0)|-1:(3,1)'
    """
    return f"{format_cube(tile.time)}|{format_cube(tile.freq)}"


def parse_tile(text: str):
    """
    Parse the tile text form

    Raises:
        TileCodecError: If the text is malformed or violates |I||ω| = 1
    """
    from src.models.tile import Tile, TileError

    parts = text.split("|")
    if len(parts) != 2:
        raise TileCodecError(f"Invalid tile format: {text!r}")
    time_cube, freq_cube = parse_cube(parts[0]), parse_cube(parts[1])
    try:
        return Tile(time_cube, freq_cube)
    except (TileError, ValueError) as e:
        raise TileCodecError(f"Invalid tile {text!r}: {e}") from e


def format_tiles(tiles) -> Tuple[str, ...]:
    """Deterministically ordered text forms of a tile collection"""
    return tuple(format_tile(t) for t in sorted(tiles, key=lambda t: t.sort_key()))
