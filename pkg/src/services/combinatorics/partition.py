"""
Window Partitions

The maximal dyadic cubes J whose triple 3J contains no time cube of a tree,
truncated to a window and capped at a coarsest scale.
"""
import logging
from typing import Dict, List, Tuple

from src.models.cube import DyadicCube, box_distance
from src.models.tile import Tile, TileError
from src.models.tree import Tree, WindowPartition

logger = logging.getLogger(__name__)


def triple_contains(J: DyadicCube, I: DyadicCube) -> bool:
    """3J ⊇ I, with 3J = [(m−1)s, (m+2)s) per axis"""
    if I.scale > J.scale + 1:
        return False
    unit = min(J.scale, I.scale)
    j_size, i_size = 1 << (J.scale - unit), 1 << (I.scale - unit)
    for mj, mi in zip(J.corner, I.corner):
        if not ((mj - 1) * j_size <= mi * i_size and (mi + 1) * i_size <= (mj + 2) * j_size):
            return False
    return True


def j_partition(T: Tree, window: DyadicCube, coarsest_scale: int) -> WindowPartition:
    """
    Top-down partition of the window into cubes J with 3J ∌ I_p for p ∈ T

    Starts from the window's descendants at the cap and splits any cube whose
    triple contains a member's time cube. Cubes never shrink below the point
    where 3J is too small to hold the finest member.

    Raises:
        TileError: If a member's time cube lies outside the window
    """
    cap = min(coarsest_scale, window.scale)
    times = sorted({p.time for p in T.tiles}, key=lambda c: (c.scale, c.corner))
    for I in times:
        if not window.contains(I):
            raise TileError(f"time cube {I} of the tree lies outside the window {window}")
    start = list(window.descendants(cap))
    if not times:
        logger.warning("j_partition called with an empty tree; returning the cap-level partition")
        return WindowPartition(window, tuple(start), cap, empty_tree=True)

    out: List[DyadicCube] = []
    stack = list(reversed(start))
    while stack:
        J = stack.pop()
        if any(triple_contains(J, I) for I in times):
            stack.extend(reversed(J.children()))
        else:
            out.append(J)
    return WindowPartition(window, tuple(out), cap)


def check_partition(partition: WindowPartition, T: Tree) -> List[str]:
    """Brute-force check of disjointness, coverage, the 3J condition and maximality"""
    problems = []
    cubes = partition.cubes
    times = {p.time for p in T.tiles}
    total = sum(c.volume() for c in cubes)
    if total != partition.window.volume():
        problems.append(f"cubes cover volume {total}, window has {partition.window.volume()}")
    for a in range(len(cubes)):
        for b in range(a + 1, len(cubes)):
            if cubes[a].intersects(cubes[b]):
                problems.append(f"{cubes[a]} and {cubes[b]} overlap")
    for J in cubes:
        if not partition.window.contains(J):
            problems.append(f"{J} leaves the window")
        if any(triple_contains(J, I) for I in times):
            problems.append(f"3·{J} contains a time cube of the tree")
        if J.scale < partition.coarsest_scale:
            parent = J.parent()
            if not any(triple_contains(parent, I) for I in times):
                problems.append(f"{J} is not maximal: its parent satisfies the condition")
    return problems


def counting_lemma_sum(T: Tree, partition: WindowPartition) -> Tuple[float, Dict[str, float]]:
    """
    max over J and scales k with 2^{kn} ≤ 2ⁿ|J| of
    Σ_{p ∈ T, scale k} (1 + dist(J, I_p)/2^k)^{−5n}

    Returns:
        (maximum, {"J": …, "k": …}) for the maximizing pair
    """
    by_scale: Dict[int, List[Tile]] = {}
    for p in T.tiles:
        by_scale.setdefault(p.scale, []).append(p)
    best, where = 0.0, {}
    for J in partition.cubes:
        n = J.dim
        for k, tiles in by_scale.items():
            if k > J.scale + 1:
                continue
            side = 2.0 ** k
            total = sum((1.0 + box_distance(J, p.time) / side) ** (-5 * n) for p in tiles)
            if total > best:
                best, where = total, {"J": J, "k": k}
    return best, where
