"""
Test Tile Text Codec
"""
import pytest

from src.models.cube import DyadicCube
from src.models.tile import Tile
from src.utils.tilecode import TileCodecError, format_cube, format_tile, format_tiles, parse_cube, parse_tile


def test_format_cube():
    assert format_cube(DyadicCube(0, (1, 2))) == "0:(1,2)"
    assert format_cube(DyadicCube(-3, (-1,))) == "-3:(-1)"


def test_parse_cube():
    assert parse_cube("2:(0,0)") == DyadicCube(2, (0, 0))
    assert parse_cube(" -1 : ( 3 , 4 ) ") == DyadicCube(-1, (3, 4))
    assert parse_cube("0:(1,)") == DyadicCube(0, (1,))


def test_parse_cube_invalid():
    with pytest.raises(TileCodecError, match="Invalid cube format"):
        parse_cube("2:0,0")
    with pytest.raises(TileCodecError):
        parse_cube("")


def test_format_tile():
    assert format_tile(Tile.from_indices(1, (0, 0), (3, 1))) == "1:(0,0)|-1:(3,1)"


def test_parse_tile():
    assert parse_tile("1:(0,0)|-1:(3,1)") == Tile.from_indices(1, (0, 0), (3, 1))


def test_parse_tile_area_violation():
    with pytest.raises(TileCodecError, match="Invalid tile"):
        parse_tile("0:(0)|1:(0)")


def test_parse_tile_missing_separator():
    with pytest.raises(TileCodecError, match="Invalid tile format"):
        parse_tile("0:(0)")


def test_format_tiles_is_ordered():
    tiles = {Tile.from_indices(1, (0,), (0,)), Tile.from_indices(0, (1,), (0,)), Tile.from_indices(0, (0,), (1,))}

    assert format_tiles(tiles) == ("0:(0)|0:(1)", "0:(1)|0:(0)", "1:(0)|-1:(0)")
