"""
Random Ensembles

Seeded generators for the experiment inputs: tile subsets, trees, and the
set/direction-field pairs (E, N). Instance seeds are spawned from one root
seed so that instances stay independent and reproducible in any order.
"""
import logging
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.ndimage import gaussian_filter

from src.models.cube import DyadicCube
from src.models.grid import DirectionField, Grid, SetIndicator
from src.models.tile import Tile, semitile
from src.models.tree import Tree
from src.services.combinatorics.universe import TileUniverse

logger = logging.getLogger(__name__)


class EnsembleError(ValueError):
    """Raised when an ensemble request cannot be met"""
    pass


def instance_seeds(seed: Union[int, Sequence[int]], count: int) -> List[int]:
    """Independent per-instance seeds spawned from a root seed"""
    if count < 0:
        raise EnsembleError(f"count must be >= 0, got {count}")
    return [int(child.generate_state(1)[0]) for child in np.random.SeedSequence(seed).spawn(count)]


def random_tile_set(seed: int, universe: TileUniverse, count: int) -> frozenset:
    """
    count tiles drawn uniformly without replacement

    Raises:
        EnsembleError: If count is negative or exceeds the universe size
    """
    if not 0 <= count <= len(universe):
        raise EnsembleError(f"count must lie in 0..{len(universe)}, got {count}")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(universe), size=count, replace=False)
    return frozenset(universe.tiles[i] for i in chosen)


def random_tree(seed: int, universe: TileUniverse, max_tiles: int) -> Tree:
    """
    A top from the universe, itself a member, and at most max_tiles - 1 further
    universe tiles below it

    Tops are drawn with weight |{p : p ≤ top}| (the top itself counts), so
    coarse tops with many tiles below them dominate, and a tree holds at least
    two tiles whenever its top allows it.

    Raises:
        EnsembleError: If the universe is empty or max_tiles < 1
    """
    if len(universe) == 0:
        raise EnsembleError("cannot draw a tree from an empty universe")
    if max_tiles < 1:
        raise EnsembleError(f"max_tiles must be >= 1, got {max_tiles}")
    rng = np.random.default_rng(seed)
    below_counts = universe.leq.sum(axis=0).astype(float)
    top = int(rng.choice(len(universe), p=below_counts / below_counts.sum()))
    below = np.flatnonzero(universe.leq[:, top])
    upper = min(max_tiles, below.size)
    size = int(rng.integers(min(2, upper), upper + 1))
    others = below[below != top]
    chosen = [top] + list(rng.choice(others, size=size - 1, replace=False))
    return Tree(frozenset(universe.tiles[i] for i in chosen), universe.tiles[top])


def covering_window(universe: TileUniverse) -> DyadicCube:
    """Smallest dyadic cube containing every time cube of the universe"""
    if len(universe) == 0:
        raise EnsembleError("an empty universe has no window")
    window = universe.tiles[0].time
    for t in universe.tiles:
        while not window.contains(t.time):
            window = window.parent()
    return window


def semitile_centers(tiles: Iterable[Tile], r: int) -> np.ndarray:
    """Distinct centers c(ω_{p(r)}) over the tiles, lex sorted"""
    centers = {tuple(float(c) for c in semitile(p, r).center()) for p in tiles}
    return np.array(sorted(centers), dtype=float)


def tree_region(tree: Tree, window: DyadicCube, target_measure: float) -> DyadicCube:
    """
    Smallest dyadic ancestor of I_T with measure at least twice the target,
    never coarser than the window

    Raises:
        EnsembleError: If the tree is empty or I_T leaves the window
    """
    if not tree.tiles:
        raise EnsembleError("cannot localize E on an empty tree")
    region = tree.top.time
    if not window.contains(region):
        raise EnsembleError(f"tree top {tree.top} lies outside the window {window}")
    while float(region.volume()) < 2 * target_measure and region != window:
        region = region.parent()
    return region


def random_E_and_N(
    seed: int,
    grid: Grid,
    universe: TileUniverse,
    target_measure: float,
    r: int,
    window: Optional[DyadicCube] = None,
    smoothing: float = 2.0,
    block_scale: Optional[int] = None,
    tree: Optional[Tree] = None,
) -> Tuple[SetIndicator, DirectionField]:
    """
    A set E of the target measure inside the window and a piecewise constant N

    E is the set of the round(target/hⁿ) region cells where a smoothed noise
    field is largest, so |E| is within one cell of the target. N is constant
    on dyadic blocks of side 2^block_scale (default: the finest scale of the
    tiles supplying its values) with values drawn from semitile-r centers.

    Without a tree the region is the window and N draws from the whole
    universe. With a tree, E lies in tree_region(tree, window, target) and N
    draws from the centers c(ω_{p(r)}) of the tree's members, so every cell
    of E belongs to E ∩ N⁻¹[ω_{p(r)}] for some member p.

    Args:
        seed: Root seed
        grid: Sampling grid
        universe: Tiles supplying the window and the values of N
        target_measure: Desired |E| in (0, 1]
        r: Semitile index for the values of N
        window: Region holding E (default: the covering window of the universe)
        smoothing: Gaussian filter width in grid cells
        block_scale: log2 side of the blocks on which N is constant
        tree: Tree whose top localizes E and whose members supply N

    Raises:
        EnsembleError: If the target is outside (0, 1], exceeds the region, or rounds to no cell
    """
    if not 0 < target_measure <= 1:
        raise EnsembleError(f"target measure must lie in (0, 1], got {target_measure}")
    window = covering_window(universe) if window is None else window
    region = window if tree is None else tree_region(tree, window, target_measure)
    slices = grid.cube_slices(region)
    if slices is None:
        raise EnsembleError(f"window {region} holds no grid point")
    rng = np.random.default_rng(seed)

    inside = np.zeros(grid.shape, dtype=bool)
    inside[slices] = True
    available = int(np.count_nonzero(inside))
    cells = int(round(target_measure / grid.cell_volume))
    if cells < 1 or cells > available:
        raise EnsembleError(
            f"target measure {target_measure} needs {cells} cells, the window has {available}"
        )
    noise = gaussian_filter(rng.normal(size=grid.shape), sigma=smoothing, mode="wrap")
    candidates = np.flatnonzero(inside.reshape(-1))
    order = np.argsort(-noise.reshape(-1)[candidates], kind="stable")
    member = np.zeros(grid.points ** grid.dim, dtype=bool)
    member[candidates[order[:cells]]] = True
    E = SetIndicator(grid, member.reshape(grid.shape))

    sources = list(universe) if tree is None else sorted(tree.tiles, key=lambda t: t.sort_key())
    centers = semitile_centers(sources, r)
    h_log2 = grid.log2_length - grid.log2_points
    if block_scale is None:
        block_scale = min(p.scale for p in sources)
    width = 1 << max(0, block_scale - h_log2)
    width = min(width, grid.points)
    blocks = (grid.points // width,) * grid.dim
    values = centers[rng.integers(len(centers), size=blocks)]
    for axis in range(grid.dim):
        values = np.repeat(values, width, axis=axis)
    if tree is not None:
        top_center = tuple(float(c) for c in semitile(tree.top, r).center())
        cycle = [top_center] + [tuple(c) for c in centers if tuple(c) != top_center]
        assigned = np.array(cycle, dtype=float)[np.arange(cells) % len(cycle)]
        values[E.member] = assigned[rng.permutation(cells)]
    N = DirectionField(grid, values)
    logger.debug(f"random_E_and_N: |E| = {E.measure:.4g} of target {target_measure}, {len(centers)} N values")
    return E, N


def window_tile_counts(universe: TileUniverse) -> dict:
    """Tile count per scale, for logging ensemble sizes"""
    scales, counts = np.unique(universe.scale, return_counts=True)
    return {int(s): int(c) for s, c in zip(scales, counts)}
