"""
Mass Pruning

Splits P into P′ = {p : ℳ({p}) > μ/4} and its residual, covers P′ by trees
whose tops are the maximal witnesses, and runs the greedy selection of
tiles with disjoint enlarged rectangles that bounds Σ|I_top| by C₁/μ.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

from src.models.tile import Tile, tile_leq
from src.models.tree import Tree
from src.services.combinatorics.trees import maximal_elements
from src.services.functionals.mass import MassTable

logger = logging.getLogger(__name__)


@dataclass
class MassLevel:
    """Selection data of one U_max element"""

    k: Optional[int]
    local_measure: float = 0.0
    ratio: float = 0.0


@dataclass
class MassPruneResult:
    mu: float
    kept: FrozenSet[Tile] = frozenset()
    residual: FrozenSet[Tile] = frozenset()
    tree_cover: List[Tree] = field(default_factory=list)
    witnesses: Dict[Tile, Tile] = field(default_factory=dict)
    u_max: FrozenSet[Tile] = frozenset()
    levels: Dict[Tile, MassLevel] = field(default_factory=dict)
    v_k: Dict[int, Tuple[Tile, ...]] = field(default_factory=dict)
    association: Dict[int, Tuple[float, float]] = field(default_factory=dict)
    sum_tops: float = 0.0
    ambiguous: int = 0
    flags: List[str] = field(default_factory=list)

    @property
    def c1(self) -> float:
        """Measured Σ|I_top|·μ"""
        return self.sum_tops * self.mu


def _level_count(table: MassTable, u: Tile) -> int:
    # enough enlargements for 2^k I_u to cover the grid box from anywhere inside it
    return max(1, table.grid.log2_length - u.scale + 3)


def annulus_level(table: MassTable, u: Tile, mu: float) -> Optional[int]:
    """
    Smallest k ≥ 0 with (2ⁿ−1)/2^{n+2}·μ|I_u|2^{−kn} < ∫ over the k-th annulus

    None when no level qualifies.
    """
    n = u.dim
    integrals = table.annulus_integrals(u, _level_count(table, u))
    volume = float(u.time.volume())
    for k, value in enumerate(integrals):
        threshold = (2 ** n - 1) / 2 ** (n + 2) * mu * volume * 2.0 ** (-k * n)
        if threshold < value:
            return k
    return None


def _enlarged_disjoint(u: Tile, v: Tile, k: int) -> bool:
    factor = 2 ** k
    return not (u.freq.intersects(v.freq) and u.time.enlarged(factor).intersects(v.time.enlarged(factor)))


def greedy_disjoint_enlargements(candidates: Iterable[Tile], k: int) -> Tuple[Tile, ...]:
    """
    Repeatedly select the tile with the largest |I_v| whose rectangle
    (2^k I_v) × ω_v misses every selected one; ties by time corner then
    frequency corner
    """
    order = sorted(candidates, key=lambda t: (-t.scale, t.time.corner, t.freq.corner))
    selected: List[Tile] = []
    for v in order:
        if all(_enlarged_disjoint(v, w, k) for w in selected):
            selected.append(v)
    return tuple(selected)


def prune_mass(P: Iterable[Tile], table: MassTable) -> MassPruneResult:
    """
    Mass pruning of P against a precomputed mass table

    Args:
        P: Tile set (members of the table's universe)
        table: Mass integrals for E, N over the universe

    Returns:
        MassPruneResult; flags record vacuous runs and witness ambiguities
    """
    tiles = frozenset(P)
    if not tiles:
        return MassPruneResult(0.0, flags=["empty"])
    mu = table.of(tiles).value
    if mu <= 0:
        logger.warning("prune_mass on a set of zero mass; nothing kept")
        return MassPruneResult(0.0, residual=tiles, flags=["zero-mass"])

    singles = {p: table.single(p) for p in tiles}
    kept = frozenset(p for p, v in singles.items() if v.value > mu / 4)
    residual = tiles - kept
    result = MassPruneResult(mu, kept, residual)
    if not kept:
        result.flags.append("vacuous")
        return result

    result.witnesses = {p: singles[p].witness for p in kept}
    u_max = maximal_elements(result.witnesses.values())
    result.u_max = frozenset(u_max)
    tops = sorted(u_max, key=lambda t: t.sort_key())

    members: Dict[Tile, set] = {t: set() for t in tops}
    for p in sorted(kept, key=lambda t: t.sort_key()):
        dominating = [t for t in tops if tile_leq(result.witnesses[p], t)]
        if len([t for t in tops if tile_leq(p, t)]) > 1:
            result.ambiguous += 1
        members[dominating[0]].add(p)
    if result.ambiguous:
        logger.warning(f"{result.ambiguous} kept tiles lie below several maximal witnesses")
        result.flags.append("ambiguous-witness")
    result.tree_cover = [Tree(frozenset(members[t]), t) for t in tops]
    result.sum_tops = float(sum(float(t.time.volume()) for t in tops))

    by_level: Dict[int, List[Tile]] = {}
    n = tops[0].dim
    for u in tops:
        k = annulus_level(table, u, mu)
        if k is None:
            result.levels[u] = MassLevel(None)
            result.flags.append("no-annulus-level")
            continue
        local = table.local_measure(u, k)
        ratio = local / (mu * float(u.time.volume()) * 2.0 ** (9 * k * n))
        result.levels[u] = MassLevel(k, local, ratio)
        by_level.setdefault(k, []).append(u)

    for k, group in sorted(by_level.items()):
        selected = greedy_disjoint_enlargements(group, k)
        result.v_k[k] = selected
        lhs = float(sum(float(u.time.volume()) for u in group))
        rhs = float(2.0 ** ((k + 2) * n) * sum(float(v.time.volume()) for v in selected))
        result.association[k] = (lhs, rhs)
    logger.debug(
        f"prune_mass: μ={mu:.4g}, kept {len(kept)}/{len(tiles)}, "
        f"{len(tops)} tops, Σ|I_top|={result.sum_tops:.4g}"
    )
    return result


def selected_rectangles_disjoint(result: MassPruneResult) -> bool:
    """Every V_k has pairwise disjoint enlarged rectangles"""
    for k, selected in result.v_k.items():
        for a in range(len(selected)):
            for b in range(a + 1, len(selected)):
                if not _enlarged_disjoint(selected[a], selected[b], k):
                    return False
    return True


def selected_sets_disjoint(result: MassPruneResult, table: MassTable) -> bool:
    """The sets E ∩ N⁻¹[ω_v] ∩ 2^k I_v, v ∈ V_k, are pairwise disjoint"""
    for k, selected in result.v_k.items():
        seen = None
        for v in selected:
            chosen = table.local_mask(v, k)
            if seen is not None and np.any(seen & chosen):
                return False
            seen = chosen if seen is None else seen | chosen
    return True
