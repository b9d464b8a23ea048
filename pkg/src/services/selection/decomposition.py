"""
Main Decomposition

Splits P into disjoint levels P_j, j = m₀, m₀−1, …, each a union of trees,
by decreasing induction on j with the four energy/mass cases, and certifies
at every level

    (1) ℰ(P_j) ≤ 2^{(j+1)n}          (2) ℳ(P_j) ≤ 2^{(2j+2)n}
    (3) ℰ(rest) ≤ 2^{jn}             (4) ℳ(rest) ≤ 2^{2jn}
    (5) Σ_k |I_{T_jk}| ≤ C₀ 2^{−2jn}

where rest = P ∖ (P_{m₀} ∪ … ∪ P_j). One pruning pass divides ℳ by 4 and ℰ by
2 while the level bounds drop by 4ⁿ and 2ⁿ, so a level repeats the passes
(at most n of each kind) and C₀ = n·(C₁ + C₂) with C₁, C₂ measured.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional

from src.config import get_settings
from src.models.tile import Tile
from src.models.tree import Tree
from src.models.types import InequalityCheck
from src.services.combinatorics.trees import decompose_into_trees
from src.services.combinatorics.universe import TileUniverse
from src.services.functionals.energy import energy
from src.services.functionals.mass import MassTable
from src.services.operators.coefficients import TileWeights
from src.services.selection.energy_prune import prune_energy
from src.services.selection.mass_prune import prune_mass

logger = logging.getLogger(__name__)


class DecompositionError(RuntimeError):
    """Raised when the descent passes the level guard without exhausting P"""
    pass


@dataclass
class LevelRecord:
    j: int
    case: str
    tiles: FrozenSet[Tile] = frozenset()
    trees: List[Tree] = field(default_factory=list)
    energy: float = 0.0
    mass: float = 0.0
    residual_energy: float = 0.0
    residual_mass: float = 0.0
    checks: List[InequalityCheck] = field(default_factory=list)
    passes: List[str] = field(default_factory=list)

    @property
    def sum_tops(self) -> float:
        return float(sum(float(t.top.time.volume()) for t in self.trees))


@dataclass
class DecompositionCertificate:
    dim: int
    m0: int
    levels: List[LevelRecord] = field(default_factory=list)
    c1: float = 0.0
    c2: float = 0.0
    c0: float = 1.0
    chain_sum: float = 0.0
    partition_ok: bool = True

    @property
    def passed(self) -> bool:
        return self.partition_ok and all(c.passed for level in self.levels for c in level.checks)

    def failures(self) -> List[str]:
        out = [f"j={level.j}: {c.name}" for level in self.levels for c in level.checks if not c.passed]
        if not self.partition_ok:
            out.append("levels do not partition P")
        return out


def start_level(energy_value: float, mass_value: float, dim: int) -> int:
    """Minimal m₀ with ℰ ≤ 2^{m₀n} and ℳ ≤ 2^{2m₀n}; zero values impose nothing"""
    m0 = None
    if energy_value > 0:
        m = math.ceil(math.log2(energy_value) / dim)
        while energy_value > 2.0 ** (m * dim):
            m += 1
        while energy_value <= 2.0 ** ((m - 1) * dim):
            m -= 1
        m0 = m
    if mass_value > 0:
        m = math.ceil(math.log2(mass_value) / (2 * dim))
        while mass_value > 2.0 ** (2 * m * dim):
            m += 1
        while mass_value <= 2.0 ** (2 * (m - 1) * dim):
            m -= 1
        m0 = m if m0 is None else max(m0, m)
    return 0 if m0 is None else m0


def decompose_main(
    P: Iterable[Tile],
    table: MassTable,
    coeffs: TileWeights,
    r: int,
    universe: Optional[TileUniverse] = None,
    zero_tolerance: Optional[float] = None,
    level_guard: Optional[int] = None,
) -> DecompositionCertificate:
    """
    Run the decreasing induction over P and certify properties (1)-(5)

    Args:
        P: Tile set inside the universe
        table: Mass table for E, N over the universe
        coeffs: Coefficients ⟨f, φ_p⟩ covering P
        r: Semitile index of the energy trees
        universe: Tops for energy (defaults to the mass table's universe)
        zero_tolerance: Residual functionals at or below count as exhausted
        level_guard: Number of levels below m₀ before giving up

    Raises:
        DecompositionError: If P is not exhausted within the level guard
    """
    settings = get_settings()
    zero_tolerance = settings.zero_tolerance if zero_tolerance is None else zero_tolerance
    level_guard = settings.level_guard if level_guard is None else level_guard
    universe = table.universe if universe is None else universe
    tiles = frozenset(P)

    def E(S):
        return energy(S, coeffs, r, universe).value if S else 0.0

    def M(S):
        return table.of(S).value if S else 0.0

    n = universe.dim or 1
    if not tiles:
        return DecompositionCertificate(n, 0)

    m0 = start_level(E(tiles), M(tiles), n)
    cert = DecompositionCertificate(n, m0)
    cert.levels.append(LevelRecord(m0, "start", residual_energy=E(tiles), residual_mass=M(tiles)))
    rest = tiles
    exhausted = False
    j = m0
    c1s, c2s = [0.0], [0.0]

    while rest:
        j -= 1
        if j < m0 - level_guard:
            raise DecompositionError(
                f"{len(rest)} tiles left after {level_guard} levels below m₀ = {m0}; "
                f"residual ℰ={E(rest):.3e}, ℳ={M(rest):.3e}"
            )
        e_rest, m_rest = E(rest), M(rest)
        if not exhausted and e_rest <= zero_tolerance and m_rest <= zero_tolerance:
            exhausted = True
            logger.debug(f"decompose_main: residual of {len(rest)} tiles exhausted at j={j}")

        if exhausted:
            trees = decompose_into_trees(rest)
            if sum(float(t.top.time.volume()) for t in trees) <= _c0(c1s, c2s, n) * 2.0 ** (-2 * j * n):
                cert.levels.append(LevelRecord(j, "terminal", rest, trees))
                rest = frozenset()
                continue

        record = _prune_level(j, n, rest, table, coeffs, r, universe, E, M, c1s, c2s)
        rest = rest - record.tiles
        cert.levels.append(record)
        logger.debug(
            f"decompose_main: j={j} case {record.case} ({'+'.join(record.passes) or 'no pass'}), "
            f"{len(record.tiles)} tiles, {len(rest)} left"
        )

    cert.c1, cert.c2 = max(c1s), max(c2s)
    cert.c0 = _c0(c1s, c2s, n)
    _certify(cert, tiles, E, M)
    return cert


def _prune_level(j, n, rest, table, coeffs, r, universe, E, M, c1s, c2s) -> LevelRecord:
    """
    Mass passes until ℳ ≤ 2^{2jn}, then energy passes until ℰ ≤ 2^{jn}

    Entering with ℰ ≤ 2^{(j+1)n} and ℳ ≤ 2^{(2j+2)n}, each mass pass divides ℳ by 4
    and each energy pass divides ℰ by 2, so at most n passes of each kind run.
    Removing tiles never raises either functional.
    """
    taken: FrozenSet[Tile] = frozenset()
    trees: List[Tree] = []
    passes: List[str] = []
    remaining = rest
    for _ in range(2 * n):
        if M(remaining) > 2.0 ** (2 * j * n):
            by_mass = prune_mass(remaining, table)
            c1s.append(by_mass.c1)
            kept, new_trees, kind = by_mass.kept, list(by_mass.tree_cover), "mass"
        elif E(remaining) > 2.0 ** (j * n):
            by_energy = prune_energy(remaining, coeffs, r, universe)
            c2s.append(by_energy.c2)
            kept, new_trees, kind = by_energy.kept, [full for full, _ in by_energy.trees], "energy"
        else:
            break
        if not kept:
            logger.warning(f"decompose_main: {kind} pass at j={j} selected no tile")
            break
        taken, remaining = taken | kept, remaining - kept
        trees.extend(new_trees)
        passes.append(kind)
    else:
        if M(remaining) > 2.0 ** (2 * j * n) or E(remaining) > 2.0 ** (j * n):
            logger.warning(f"decompose_main: residual above the level-{j} bounds after {2 * n} passes")

    big_energy = E(rest) > 2.0 ** (j * n)
    big_mass = M(rest) > 2.0 ** (2 * j * n)
    if big_energy and big_mass:
        case = "4b" if "energy" in passes else "4a"
    else:
        case = "2" if big_energy else "3" if big_mass else "1"
    return LevelRecord(j, case, taken, trees, passes=passes)


def _c0(c1s: List[float], c2s: List[float], n: int) -> float:
    total = n * (max(c1s) + max(c2s))
    return total if total > 0 else 1.0


def _certify(cert: DecompositionCertificate, tiles: FrozenSet[Tile], E, M):
    n = cert.dim
    removed: FrozenSet[Tile] = frozenset()
    seen = 0
    for level in cert.levels:
        j = level.j
        removed = removed | level.tiles
        seen += len(level.tiles)
        rest = tiles - removed
        level.energy, level.mass = E(level.tiles), M(level.tiles)
        level.residual_energy, level.residual_mass = E(rest), M(rest)
        level.checks = [
            InequalityCheck.leq("energy", level.energy, 2.0 ** ((j + 1) * n)),
            InequalityCheck.leq("mass", level.mass, 2.0 ** ((2 * j + 2) * n)),
            InequalityCheck.leq("residual-energy", level.residual_energy, 2.0 ** (j * n)),
            InequalityCheck.leq("residual-mass", level.residual_mass, 2.0 ** (2 * j * n)),
            InequalityCheck.leq("tops", level.sum_tops, cert.c0 * 2.0 ** (-2 * j * n)),
        ]
        covered = frozenset().union(*(t.tiles for t in level.trees)) if level.trees else frozenset()
        if not level.tiles <= covered:
            level.checks.append(InequalityCheck("tree-cover", float(len(level.tiles - covered)), 0.0, False))
        cert.chain_sum += level.sum_tops * 2.0 ** ((j + 1) * n) * min(1.0, 2.0 ** ((2 * j + 2) * n))
    cert.partition_ok = removed == tiles and seen == len(tiles)
