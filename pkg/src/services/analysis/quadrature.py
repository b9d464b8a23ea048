"""
Quadrature, weak-L² and dyadic maximal averages on grids
"""
from typing import Optional, Tuple

import numpy as np

from src.models.cube import DyadicCube
from src.models.grid import GridError, GridFunction, check_compatible


def inner_product(f: GridFunction, g: GridFunction) -> complex:
    """
    ⟨f, g⟩ = Σ f·conj(g)·hⁿ

    Raises:
        GridError: If the grids or domains differ
    """
    check_compatible(f, g)
    if f.domain != "space":
        raise GridError("inner_product expects space-domain functions")
    return complex(np.vdot(g.samples, f.samples) * f.grid.cell_volume)


def l2_norm(f: GridFunction) -> float:
    return f.norm()


def distribution_function(values: np.ndarray, cell_volume: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Levels λ (distinct magnitudes, descending) and |{|g| ≥ λ}| at each level

    Just below a level λ the set {|g| > λ − 0} has exactly this measure.
    """
    magnitudes = np.sort(np.abs(np.asarray(values)).reshape(-1))[::-1]
    magnitudes = magnitudes[magnitudes > 0]
    if magnitudes.size == 0:
        return np.zeros(0), np.zeros(0)
    counts = np.arange(1, magnitudes.size + 1)
    # keep the last occurrence of each distinct value
    last = np.append(magnitudes[1:] != magnitudes[:-1], True)
    return magnitudes[last], counts[last] * cell_volume


def weak_l2_quasinorm(g: GridFunction) -> float:
    """
    sup_λ λ·|{|g| > λ}|^{1/2}, exact for the sampled (piecewise constant) g

    Examples:
        g = 0 → 0; g = c·1_A → |c|·|A|^{1/2}
    """
    levels, measures = distribution_function(g.samples, g.grid.cell_volume)
    if levels.size == 0:
        return 0.0
    return float(np.max(levels * np.sqrt(measures)))


def cube_average(values: np.ndarray, grid, cube: DyadicCube) -> float:
    """(1/|I|) ∫_I |g| by Riemann sum; the cube must be grid aligned"""
    slices = grid.cube_slices(cube)
    if slices is None:
        return 0.0
    return float(np.sum(np.abs(values[slices])) * grid.cell_volume / float(cube.volume()))


def dyadic_maximal(values: np.ndarray, grid, J: DyadicCube, window: DyadicCube) -> Tuple[float, Optional[DyadicCube]]:
    """
    sup of (1/|I|)∫_I |g| over dyadic I with J ⊆ I ⊆ window

    Returns:
        (value, maximizing cube)

    Raises:
        ValueError: If J is not inside the window
    """
    if not window.contains(J):
        raise ValueError(f"cube {J} is not inside the window {window}")
    best, best_cube = -1.0, None
    cube = J
    while True:
        avg = cube_average(values, grid, cube)
        if avg > best:
            best, best_cube = avg, cube
        if cube.scale >= window.scale:
            break
        cube = cube.parent()
    return best, best_cube


def dyadic_maximal_function(g: GridFunction, window: DyadicCube, finest_scale: int) -> np.ndarray:
    """
    Dyadic Hardy–Littlewood maximal function inside the window

    At each grid point of the window: sup over dyadic cubes of scale in
    [finest_scale, window.scale] containing it of the average of |g|.
    Points outside the window are 0.
    """
    grid = g.grid
    h_log2 = grid.log2_length - grid.log2_points
    if finest_scale < h_log2:
        raise ValueError(f"finest_scale {finest_scale} is below the grid spacing 2^{h_log2}")
    slices = grid.cube_slices(window)
    out = np.zeros(grid.shape)
    if slices is None:
        return out
    block = np.abs(g.samples[slices])
    result = np.zeros(block.shape)
    for scale in range(finest_scale, window.scale + 1):
        width = 1 << (scale - h_log2)
        if any(size % width for size in block.shape):
            continue
        reshaped_shape = []
        for size in block.shape:
            reshaped_shape.extend([size // width, width])
        averaged = block.reshape(reshaped_shape).mean(axis=tuple(range(1, 2 * grid.dim, 2)))
        expanded = averaged
        for axis in range(grid.dim):
            expanded = np.repeat(expanded, width, axis=axis)
        result = np.maximum(result, expanded)
    out[slices] = result
    return out
