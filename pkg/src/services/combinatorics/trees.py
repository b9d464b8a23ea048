"""
Tree Decompositions

Maximal elements, covering a finite tile set by trees, splitting trees into
i-trees, and the geometric separation properties of selected energy trees.
"""
import logging
from typing import Dict, Iterable, List, Sequence, Set, Tuple

from src.models.tile import Tile, semitile, tile_leq, tiles_intersect
from src.models.tree import ITree, Tree

logger = logging.getLogger(__name__)


def maximal_elements(P: Iterable[Tile]) -> Set[Tile]:
    """
    Tiles of P not strictly below another member of P

    Maximal elements are pairwise disjoint: intersecting tiles are comparable.
    """
    tiles = list(set(P))
    out = set()
    for p in tiles:
        if not any(q != p and tile_leq(p, q) for q in tiles):
            out.add(p)
    return out


def decompose_into_trees(P: Iterable[Tile]) -> List[Tree]:
    """
    Cover P by trees whose tops are the maximal elements of P

    A tile below several tops goes to the top that is smallest in
    (scale, time corner, frequency corner) order.

    Returns:
        Trees ordered by their top's sort key
    """
    tiles = set(P)
    if not tiles:
        return []
    tops = sorted(maximal_elements(tiles), key=lambda t: t.sort_key())
    members: Dict[Tile, Set[Tile]] = {t: set() for t in tops}
    for p in tiles:
        owner = next(t for t in tops if tile_leq(p, t))
        members[owner].add(p)
    return [Tree(frozenset(members[t]), t) for t in tops]


def itree_index(p: Tile, top: Tile, r: int) -> int:
    """
    The i with ω_{T(i)} ⊆ ω_{p(i)} for a member p of a tree with the given top

    ω_p = ω_T satisfies every i; that case returns r.
    """
    if p.freq == top.freq:
        return r
    for i in range(1, 2 ** p.dim + 1):
        if semitile(p, i).contains(top.freq):
            return i
    raise ValueError(f"{p!r} is not below {top!r}")


def split_into_itrees(T: Tree, r: int) -> List[ITree]:
    """
    Partition T into 2ⁿ i-trees sharing T's top (some possibly empty)

    Returns:
        ITrees for i = 1..2ⁿ in order
    """
    buckets: Dict[int, Set[Tile]] = {i: set() for i in range(1, 2 ** T.top.dim + 1)}
    for p in T.tiles:
        buckets[itree_index(p, T.top, r)].add(p)
    return [ITree(Tree(frozenset(buckets[i]), T.top), i) for i in sorted(buckets)]


def rtree_part(T: Tree, r: int) -> Tree:
    """Members of T satisfying ω_{T(r)} ⊆ ω_{p(r)}"""
    top_semi = semitile(T.top, r)
    return Tree(frozenset(p for p in T.tiles if semitile(p, r).contains(top_semi)), T.top)


def check_tree_cover(P: Iterable[Tile], trees: Sequence[Tree]) -> List[str]:
    """Brute-force verification of a tree cover; returns problems found"""
    problems = []
    tiles = set(P)
    seen: Set[Tile] = set()
    for tree in trees:
        for p in tree.tiles:
            if p in seen:
                problems.append(f"{p!r} assigned twice")
            seen.add(p)
            if not tile_leq(p, tree.top):
                problems.append(f"{p!r} not below its top {tree.top!r}")
    if seen != tiles:
        problems.append(f"cover differs from P by {len(seen ^ tiles)} tiles")
    for a in range(len(trees)):
        for b in range(a + 1, len(trees)):
            if tiles_intersect(trees[a].top, trees[b].top):
                problems.append(f"tops {trees[a].top!r} and {trees[b].top!r} intersect")
    return problems


def separation_violations(selected: Sequence[Tuple[Tile, Iterable[Tile]]]) -> List[dict]:
    """
    Geometric separation of selected energy trees

    For p in one selected tree T_j′ and u in any selected tree with
    ω_p ⊆ ω_{u(1)}: I_u must miss I_{T_j}; and two distinct such u, v for
    the same p must have disjoint time cubes.

    Args:
        selected: (top of T_j, members of T_j′) in selection order

    Returns:
        One dict per violation (empty when both properties hold)
    """
    all_members = [(j, u) for j, (_, members) in enumerate(selected) for u in members]
    violations = []
    for j, (top, members) in enumerate(selected):
        for p in members:
            witnesses = [u for _, u in all_members if semitile(u, 1).contains(p.freq)]
            for u in witnesses:
                if u.time.intersects(top.time):
                    violations.append({"kind": "time-overlap-top", "p": p, "u": u, "tree": j})
            for a in range(len(witnesses)):
                for b in range(a + 1, len(witnesses)):
                    if witnesses[a].time.intersects(witnesses[b].time):
                        violations.append(
                            {"kind": "witness-overlap", "p": p, "u": witnesses[a], "v": witnesses[b]}
                        )
    return violations
