"""
Experiment Tasks

Runs the named experiments over seeded ensembles, re-verifies every
recorded inequality through an oracle path, aggregates measured constants
as ensemble maxima and writes the report, tables and plot data.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import lru_cache
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

import numpy as np

from src.config import get_settings
from src.models.cube import DyadicCube
from src.models.grid import Grid, GridFunction
from src.models.tree import Tree
from src.models.types import InequalityCheck
from src.schemas.certificate import CertificateSchema
from src.schemas.experiment import EXPERIMENTS, ExperimentConfig
from src.schemas.report import (
    AcceptanceCheck,
    ConstantRecord,
    ExperimentRecord,
    InequalityRecord,
    InstanceRecord,
    Report,
    RunMeta,
)
from src.services.analysis.bump import BumpProfile, PhiHat, build_phi_hat
from src.services.analysis.fourier import forward
from src.services.analysis.multipliers import Multiplier, constant_one, get_multiplier
from src.services.analysis.packets import PacketCache, packet_decay_profile, periodization_error
from src.services.analysis.quadrature import weak_l2_quasinorm
from src.services.analysis.signals import random_test_function
from src.services.combinatorics.partition import check_partition
from src.services.combinatorics.trees import separation_violations
from src.services.combinatorics.universe import TileUniverse
from src.services.ensemble import instance_seeds, random_E_and_N, random_tile_set, random_tree, window_tile_counts
from src.services.functionals.energy import energy
from src.services.functionals.mass import MassTable
from src.services.operators.bessel import bessel_check
from src.services.operators.claim import ClaimFields, claim1_check
from src.services.operators.coefficients import TileWeights
from src.services.operators.dyadic_sum import default_zeta_grid, eval_B_zeta_r, eval_sup_B
from src.services.operators.model_sum import model_sum
from src.services.operators.sjolin import modulated_multiplier, sjolin_operator, uniform_zeta_grid
from src.services.operators.tree_inequality import TreeInequalityInput, tree_inequality_check, tree_partition
from src.services.oracles import (
    oracle_b_zeta,
    oracle_bessel,
    oracle_claim_f2,
    oracle_energy,
    oracle_mass,
    oracle_model_sum,
    oracle_multiplier_apply,
    verify_packet_contracts,
)
from src.services.selection.decomposition import DecompositionError, decompose_main
from src.services.selection.energy_prune import prune_energy
from src.services.selection.mass_prune import prune_mass, selected_rectangles_disjoint, selected_sets_disjoint
from src.services.storage import StorageService, get_storage_service
from src.utils.config_check import check_config

logger = logging.getLogger(__name__)

# measured constant → per-instance value it is the maximum of
CONSTANTS: Dict[str, Dict[str, str]] = {
    "counting-mass": {"C1": "c1"},
    "counting-energy": {"C2": "c2"},
    "decompose": {"C0": "c0"},
    "tree-inequality": {"C3": "ratio", "C_count": "counting"},
    "bessel": {"C_bessel": "ratio"},
    "weak-l2": {"weak_ratio_max": "weak_ratio"},
    "sjolin": {"sjolin_ratio_max": "sjolin_ratio"},
    "claim1": {"C_claim1": "ratio"},
}
TIGHT_CONSTANTS = ("C1", "C2")

# experiments whose left side must be nonzero: every instance, or at least one
NONVACUOUS: Dict[str, Callable] = {"tree-inequality": all, "claim1": any}

CHAIN_SLACK = 1e-9
IDENTITY_TOLERANCE = 1e-12
MULTIPLIER_TOLERANCE = 1e-10


@dataclass
class RunContext:
    """Objects shared by every instance of a run"""

    config: ExperimentConfig
    grid: Grid
    phi_hat: PhiHat
    universe: TileUniverse
    window: DyadicCube
    m: Multiplier
    cache: PacketCache

    @property
    def tolerance(self) -> float:
        return self.config.oracle_tolerance


@dataclass
class InstanceOutcome:
    record: InstanceRecord
    artifacts: Dict[str, object] = field(default_factory=dict)


@lru_cache(maxsize=4)
def build_context(config_json: str) -> RunContext:
    """Grid, bump, universe and warmed packet cache for a config (cached per process)"""
    config = ExperimentConfig.model_validate_json(config_json)
    grid = Grid(config.dim, config.grid.log2_length, config.grid.log2_points)
    phi_hat = build_phi_hat(BumpProfile(), grid)
    uni = config.universe
    universe = TileUniverse.generate(config.dim, uni.k_min, uni.k_max, uni.time_cube, uni.freq_cube)
    cache = PacketCache(phi_hat).warm(universe.tiles)
    logger.debug(f"context: {len(universe)} tiles by scale {window_tile_counts(universe)}, {len(cache)} packets")
    return RunContext(config, grid, phi_hat, universe, uni.time_cube, get_multiplier(config.multiplier, config.dim), cache)


def _relative(value: float, reference: float) -> float:
    return abs(value - reference) / max(1.0, abs(reference))


def _array_relative(fast: np.ndarray, slow: np.ndarray) -> float:
    scale = float(np.max(np.abs(slow)))
    diff = float(np.max(np.abs(fast - slow)))
    return diff / scale if scale > 0 else diff


def _finite(name: str, lhs: float, rhs: float, ratio: float, oracle_delta: Optional[float] = None) -> InequalityCheck:
    """lhs ≤ C·rhs with C measured: passes when the ratio is finite"""
    return InequalityCheck(name, float(lhs), float(rhs), bool(np.isfinite(ratio)), oracle_delta)


def _record(index: int, seed: int, checks: List[InequalityCheck], tolerance: float, **values) -> InstanceRecord:
    return InstanceRecord(
        instance=index,
        seed=seed,
        values={k: float(v) for k, v in values.items()},
        checks=[InequalityRecord.from_check(c, tolerance) for c in checks],
    )


def _sets(ctx: RunContext, seed: int, tree: Optional[Tree] = None):
    return random_E_and_N(seed, ctx.grid, ctx.universe, ctx.config.target_measure, ctx.config.r, ctx.window, tree=tree)


def _function(ctx: RunContext, seed: int) -> GridFunction:
    return random_test_function(ctx.config.test_function, seed, ctx.grid)


def _counting_mass(ctx: RunContext, index: int, seed: int) -> InstanceOutcome:
    cfg = ctx.config
    s_tiles, s_sets = instance_seeds(seed, 2)
    P = random_tile_set(s_tiles, ctx.universe, cfg.tile_count)
    E, N = _sets(ctx, s_sets)
    table = MassTable(ctx.universe, E, N, cfg.mass_exponent)
    res = prune_mass(P, table)
    residual = table.of(res.residual).value
    checks = [
        InequalityCheck.leq(
            "mass-single", res.mu, 1.0,
            _relative(res.mu, oracle_mass(P, E, N, ctx.universe.tiles, cfg.mass_exponent)),
        ),
        InequalityCheck.leq(
            "mass-residual", residual, 0.25 * res.mu,
            _relative(residual, oracle_mass(res.residual, E, N, ctx.universe.tiles, cfg.mass_exponent)),
        ),
        InequalityCheck("mass-rectangles-disjoint", 0.0, 0.0, selected_rectangles_disjoint(res)),
        InequalityCheck("mass-sets-disjoint", 0.0, 0.0, selected_sets_disjoint(res, table)),
    ]
    for k, (lhs, rhs) in sorted(res.association.items()):
        checks.append(InequalityCheck.leq(f"mass-association-{k}", lhs, rhs))
    record = _record(index, seed, checks, ctx.tolerance, mu=res.mu, sum_tops=res.sum_tops, c1=res.c1, kept=len(res.kept))
    record.flags = list(res.flags)
    artifacts = {}
    if cfg.persist_fields and index == 0:
        artifacts = {"counting-mass-E": E, "counting-mass-N": N}
    return InstanceOutcome(record, artifacts)


def _counting_energy(ctx: RunContext, index: int, seed: int) -> InstanceOutcome:
    cfg = ctx.config
    s_tiles, s_f = instance_seeds(seed, 2)
    P = random_tile_set(s_tiles, ctx.universe, cfg.tile_count)
    coeffs = TileWeights.from_function(_function(ctx, s_f), P, ctx.cache)
    res = prune_energy(P, coeffs, cfg.r, ctx.universe)
    residual = energy(res.residual, coeffs, cfg.r, ctx.universe).value
    checks = [
        InequalityCheck.leq(
            "energy-residual", residual, res.epsilon / 2,
            _relative(residual, oracle_energy(res.residual, coeffs, cfg.r, ctx.universe.tiles)),
        ),
    ]
    if res.deltas:
        checks.append(InequalityCheck.leq(
            "energy-delta", res.epsilon / 2, min(res.deltas),
            _relative(res.epsilon, oracle_energy(P, coeffs, cfg.r, ctx.universe.tiles)),
        ))
    violations = separation_violations(res.selected)
    checks.append(InequalityCheck("energy-separation", float(len(violations)), 0.0, not violations))
    record = _record(
        index, seed, checks, ctx.tolerance,
        epsilon=res.epsilon, sum_tops=res.sum_tops, c2=res.c2, trees=len(res.trees),
    )
    record.flags = list(res.flags)
    return InstanceOutcome(record)


def _decompose(ctx: RunContext, index: int, seed: int) -> InstanceOutcome:
    cfg = ctx.config
    s_tiles, s_sets, s_f = instance_seeds(seed, 3)
    P = random_tile_set(s_tiles, ctx.universe, cfg.tile_count)
    E, N = _sets(ctx, s_sets)
    coeffs = TileWeights.from_function(_function(ctx, s_f), P, ctx.cache)
    table = MassTable(ctx.universe, E, N, cfg.mass_exponent)
    try:
        cert = decompose_main(P, table, coeffs, cfg.r, ctx.universe)
    except DecompositionError as e:
        logger.warning(f"decompose instance {index}: {e}")
        record = _record(index, seed, [InequalityCheck("level-guard", 1.0, 0.0, False)], ctx.tolerance)
        record.flags = ["level-guard"]
        return InstanceOutcome(record)

    n = cfg.dim
    start = cert.levels[0]
    checks = [
        InequalityCheck.leq(
            "start-energy", start.residual_energy, 2.0 ** (cert.m0 * n),
            _relative(start.residual_energy, oracle_energy(P, coeffs, cfg.r, ctx.universe.tiles)),
        ),
        InequalityCheck.leq(
            "start-mass", start.residual_mass, 2.0 ** (2 * cert.m0 * n),
            _relative(start.residual_mass, oracle_mass(P, E, N, ctx.universe.tiles, cfg.mass_exponent)),
        ),
        InequalityCheck("partition", float(len(P)), float(sum(len(level.tiles) for level in cert.levels)), cert.partition_ok),
    ]
    for level in cert.levels:
        checks.extend(
            InequalityCheck(f"j={level.j}:{c.name}", c.lhs, c.rhs, c.passed, c.oracle_delta) for c in level.checks
        )
    record = _record(
        index, seed, checks, ctx.tolerance,
        m0=cert.m0, levels=len(cert.levels), c0=cert.c0, c1=cert.c1, c2=cert.c2, chain_sum=cert.chain_sum,
    )
    record.flags = [f"case-{level.case}" for level in cert.levels if level.case == "terminal"]
    certificate = CertificateSchema.from_certificate(cert).model_dump_json(indent=2)
    return InstanceOutcome(record, {f"certificate-{index:04d}.json": certificate})


def _tree_input(ctx: RunContext, seed: int) -> TreeInequalityInput:
    cfg = ctx.config
    s_tree, s_sets, s_f = instance_seeds(seed, 3)
    T = random_tree(s_tree, ctx.universe, cfg.tree_max_tiles)
    E, N = _sets(ctx, s_sets, T)
    coeffs = TileWeights.from_function(_function(ctx, s_f), T.tiles, ctx.cache)
    return TreeInequalityInput(T, E, N, coeffs, ctx.m, cfg.r, ctx.window)


def _tree_inequality(ctx: RunContext, index: int, seed: int) -> InstanceOutcome:
    cfg = ctx.config
    inp = _tree_input(ctx, seed)
    table = MassTable(ctx.universe, inp.E, inp.N, cfg.mass_exponent)
    res = tree_inequality_check(inp, table)
    fast = model_sum(inp.tree.tiles, inp.E, inp.N, inp.coeffs, ctx.m, cfg.r, check=False).total
    slow = oracle_model_sum(inp.tree.tiles, inp.E, inp.N, inp.coeffs, ctx.m, cfg.r)
    bound = res.k1 + res.k2 + res.truncation
    problems = check_partition(tree_partition(inp), inp.tree)
    rhs = res.area * res.energy * res.mass
    checks = [
        InequalityCheck("tree-lhs", res.lhs, fast, _relative(res.lhs, fast) <= ctx.tolerance, _relative(res.lhs, slow)),
        InequalityCheck(
            "tree-chain", res.integrand_l1, bound,
            res.integrand_l1 <= bound * (1 + CHAIN_SLACK) + CHAIN_SLACK,
        ),
        InequalityCheck("tree-partition", float(len(problems)), 0.0, not problems),
        _finite("tree-inequality", res.lhs, rhs, res.ratio, _relative(res.lhs, slow)),
    ]
    record = _record(
        index, seed, checks, ctx.tolerance,
        lhs=res.lhs, rhs=rhs, ratio=res.ratio, k1=res.k1, k2=res.k2, truncation=res.truncation,
        counting=res.counting, f1_ratio=res.f1.get("ratio", 0.0), tiles=len(inp.tree),
    )
    if res.empty_partition:
        record.flags.append("empty-partition")
    if problems:
        logger.warning(f"tree instance {index}: partition problems {problems}")
    return InstanceOutcome(record)


def _bessel(ctx: RunContext, index: int, seed: int) -> InstanceOutcome:
    cfg = ctx.config
    s_tiles, s_f = instance_seeds(seed, 2)
    P = random_tile_set(s_tiles, ctx.universe, cfg.tile_count)
    coeffs = TileWeights.from_function(_function(ctx, s_f), P, ctx.cache)
    pruned = prune_energy(P, coeffs, cfg.r, ctx.universe)
    rtrees = [part for _, part in pruned.trees]
    res = bessel_check(rtrees, coeffs, pruned.epsilon)
    union = frozenset().union(*(t.tiles for t in rtrees)) if rtrees else frozenset()
    gram = oracle_bessel(union, coeffs)
    checks = [_finite("bessel", res.lhs_sq, res.rhs_budget, res.ratio, _relative(res.lhs_sq, gram))]
    return InstanceOutcome(_record(index, seed, checks, ctx.tolerance, lhs_sq=res.lhs_sq, budget=res.rhs_budget, ratio=res.ratio))


def _weak_l2(ctx: RunContext, index: int, seed: int) -> InstanceOutcome:
    cfg = ctx.config
    s_tiles, s_f = instance_seeds(seed, 2)
    P = random_tile_set(s_tiles, ctx.universe, max(cfg.tile_count, 1))
    f = _function(ctx, s_f)
    coeffs = TileWeights.from_function(f, P, ctx.cache)
    values: Dict[str, float] = {}
    previous, drop = None, 0.0
    sup = None
    for level in range(cfg.zeta_refinement + 1):
        zeta_grid = default_zeta_grid(P, cfg.r, level)
        sup = eval_sup_B(coeffs, P, ctx.m, cfg.r, zeta_grid)
        values[f"weak_ratio_L{level}"] = weak_l2_quasinorm(sup) / f.norm()
        current = sup.samples.real
        if previous is not None:
            drop = max(drop, float(np.max(previous - current)))
        previous = current
    values["weak_ratio"] = values[f"weak_ratio_L{cfg.zeta_refinement}"]

    zeta = default_zeta_grid(P, cfg.r)[0]
    fast = eval_B_zeta_r(coeffs, zeta, P, ctx.m, cfg.r).samples
    slow = oracle_b_zeta(coeffs, zeta, P, ctx.m, cfg.r)
    delta = _array_relative(fast, slow)
    scale = float(np.max(previous)) if previous is not None else 0.0
    checks = [
        InequalityCheck("weak-monotone", drop, 0.0, drop <= IDENTITY_TOLERANCE * max(1.0, scale)),
        InequalityCheck("weak-b-zeta-oracle", delta, ctx.tolerance, delta <= ctx.tolerance, delta),
        _finite("weak-l2", values["weak_ratio"], 1.0, values["weak_ratio"]),
    ]
    artifacts = {}
    if cfg.persist_fields and index == 0:
        artifacts = {"weak-l2-f": f, "weak-l2-sup": sup}
    return InstanceOutcome(_record(index, seed, checks, ctx.tolerance, **values), artifacts)


def _sjolin(ctx: RunContext, index: int, seed: int) -> InstanceOutcome:
    cfg = ctx.config
    f = _function(ctx, seed)
    zeta_grid = uniform_zeta_grid(ctx.grid, cfg.sjolin_zeta_per_axis)
    result = sjolin_operator(f, ctx.m, zeta_grid)
    ratio = weak_l2_quasinorm(result) / f.norm()
    identity = _array_relative(sjolin_operator(f, constant_one(), zeta_grid).samples.real, np.abs(f.samples))
    fast = modulated_multiplier(forward(f).samples, ctx.grid, ctx.m, zeta_grid[0])
    slow = oracle_multiplier_apply(f, ctx.m, zeta_grid[0])
    delta = _array_relative(fast, slow)
    checks = [
        InequalityCheck("sjolin-identity", identity, IDENTITY_TOLERANCE, identity <= IDENTITY_TOLERANCE),
        InequalityCheck("sjolin-oracle", delta, MULTIPLIER_TOLERANCE, delta <= MULTIPLIER_TOLERANCE, delta),
        _finite("sjolin", ratio, 1.0, ratio),
    ]
    return InstanceOutcome(_record(index, seed, checks, None, sjolin_ratio=ratio, zetas=len(zeta_grid)))


def _claim1(ctx: RunContext, index: int, seed: int) -> InstanceOutcome:
    inp = _tree_input(ctx, seed)
    fields = ClaimFields(inp)
    results = [claim1_check(inp, J, fields) for J in tree_partition(inp).cubes]
    if not results:
        record = _record(index, seed, [], ctx.tolerance, ratio=0.0, cubes=0)
        record.flags.append("empty-partition")
        return InstanceOutcome(record)
    worst = max(results, key=lambda res: res.ratio)
    slow = oracle_claim_f2(fields.t2, fields.field.phases, worst.J, inp.E, inp.N, inp.coeffs, ctx.m, inp.r)
    checks = [_finite("claim1", worst.lhs, worst.rhs, worst.ratio, _relative(worst.lhs, slow))]
    return InstanceOutcome(_record(
        index, seed, checks, ctx.tolerance,
        ratio=worst.ratio, lhs=worst.lhs, rhs=worst.rhs, cubes=len(results), t2=len(fields.t2),
    ))


RUNNERS: Dict[str, Callable[[RunContext, int, int], InstanceOutcome]] = {
    "counting-mass": _counting_mass,
    "counting-energy": _counting_energy,
    "decompose": _decompose,
    "tree-inequality": _tree_inequality,
    "bessel": _bessel,
    "weak-l2": _weak_l2,
    "sjolin": _sjolin,
    "claim1": _claim1,
}


def run_instance(config_json: str, name: str, index: int, seed: int) -> InstanceOutcome:
    """One ensemble instance; module level so worker processes can run it"""
    return RUNNERS[name](build_context(config_json), index, seed)


def _run_ensemble(config: ExperimentConfig, name: str, jobs: int) -> List[InstanceOutcome]:
    count = config.ensemble.size(name)
    seeds = instance_seeds([config.seed, EXPERIMENTS.index(name)], count)
    config_json = config.model_dump_json()
    args = ([config_json] * count, [name] * count, list(range(count)), seeds)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run_instance, *args))
    return [run_instance(*a) for a in zip(*args)]


def _summarize(name: str, outcomes: List[InstanceOutcome]) -> ExperimentRecord:
    record = ExperimentRecord(name=name, instances=[o.record for o in outcomes])
    for constant, key in CONSTANTS[name].items():
        values = [i.values[key] for i in record.instances if key in i.values]
        record.constants[constant] = float(max(values)) if values else 0.0
    checks = [c for i in record.instances for c in i.checks]
    passed = sum(c.passed for c in checks)
    record.acceptance.append(AcceptanceCheck(name="checks", passed=passed == len(checks), detail=f"{passed}/{len(checks)}"))
    if name in NONVACUOUS:
        lhs = [i.values.get("lhs", 0.0) for i in record.instances]
        positive = sum(value > 0 for value in lhs)
        record.acceptance.append(AcceptanceCheck(
            name="lhs-positive", passed=bool(lhs) and NONVACUOUS[name](value > 0 for value in lhs),
            detail=f"{positive}/{len(lhs)}",
        ))
    deltas = [c.oracle_delta for c in checks if c.oracle_delta is not None]
    if deltas:
        record.diagnostics["max_oracle_delta"] = float(max(deltas))
    for constant, value in record.constants.items():
        record.acceptance.append(AcceptanceCheck(name=f"{constant}-finite", passed=bool(np.isfinite(value)), detail=f"{value:.6g}"))
    flags = sorted({flag for i in record.instances for flag in i.flags})
    if flags:
        logger.warning(f"{name}: flagged instances ({', '.join(flags)})")
    return record


def _write_outputs(storage: StorageService, record: ExperimentRecord, outcomes: List[InstanceOutcome]):
    rows = []
    for i in record.instances:
        row = {"instance": i.instance, "seed": i.seed, **i.values}
        row["checks_passed"] = f"{sum(c.passed for c in i.checks)}/{len(i.checks)}"
        row["flags"] = ";".join(i.flags)
        rows.append(row)
    storage.save_table(f"{record.name}.csv", rows)
    for outcome in outcomes:
        for filename, artifact in outcome.artifacts.items():
            if isinstance(artifact, str):
                file_type = "certificate" if filename.startswith("certificate-") else "table"
                storage.save_json(filename, artifact, file_type)
            else:
                storage.save_field(filename, artifact)
    if record.name == "tree-inequality":
        storage.save_plot_data(
            "tree-inequality.dat", [(i.values["rhs"], i.values["lhs"]) for i in record.instances],
            ("area_energy_mass", "lhs"),
        )
    if record.name == "weak-l2":
        levels = sorted(int(k[len("weak_ratio_L"):]) for k in record.instances[0].values if k.startswith("weak_ratio_L"))
        storage.save_plot_data(
            "weak-l2-refinement.dat",
            [(float(lv), max(i.values[f"weak_ratio_L{lv}"] for i in record.instances)) for lv in levels],
            ("refinement", "max_weak_ratio"),
        )


def _packet_contracts(ctx: RunContext) -> ExperimentRecord:
    """Global packet checks, run only when oracles are requested"""
    cfg = ctx.config
    record = ExperimentRecord(name="packet-contracts")
    tiles = sorted(random_tile_set(cfg.seed, ctx.universe, min(50, len(ctx.universe))), key=lambda t: t.sort_key())
    contracts = verify_packet_contracts(ctx.phi_hat, tiles, cfg.seed)
    decay = 0.0
    periodization = 0.0
    for p in tiles[:5]:
        zeta = [float(c) for c in p.semitile(cfg.r).center()]
        decay = max(decay, packet_decay_profile(p, zeta, ctx.m, ctx.phi_hat, cfg.r, cfg.nu))
        periodization = max(periodization, periodization_error(p, ctx.phi_hat))
    record.diagnostics = {
        "norm_spread": contracts.norm_spread,
        "max_disjoint_overlap": contracts.max_disjoint_overlap,
        "structure_error": contracts.structure_error,
        "C_nu": decay,
        "periodization_error": periodization,
    }
    record.acceptance = [
        AcceptanceCheck(name="norm-constant", passed=contracts.norm_spread <= 1e-8, detail=f"{contracts.norm_spread:.3e}"),
        AcceptanceCheck(
            name="disjoint-orthogonal", passed=contracts.max_disjoint_overlap <= 1e-10,
            detail=f"{contracts.max_disjoint_overlap:.3e} over {contracts.checked_pairs} pairs",
        ),
        AcceptanceCheck(
            name="structure", passed=contracts.structure_error <= 1e-6,
            detail=f"{contracts.structure_error:.3e} over {contracts.checked_structure} tiles",
        ),
    ]
    return record


def pin_constants(constants: Dict[str, float], baseline: Dict[str, float]) -> List[ConstantRecord]:
    """Compare measured constants with the baseline (±20% for C₁, C₂, ±25% otherwise)"""
    settings = get_settings()
    out = []
    for name in sorted(constants):
        value = constants[name]
        if name not in baseline:
            out.append(ConstantRecord(name=name, value=value))
            continue
        slack = settings.baseline_slack if name in TIGHT_CONSTANTS else settings.baseline_slack_wide
        pinned = baseline[name]
        ok = abs(value - pinned) <= slack * abs(pinned)
        out.append(ConstantRecord(name=name, value=value, baseline=pinned, slack=slack, status="pinned-ok" if ok else "pinned-fail"))
        if not ok:
            logger.warning(f"constant {name} = {value:.6g} is outside ±{slack:.0%} of the baseline {pinned:.6g}")
    return out


def run_experiment(
    config: ExperimentConfig,
    which: str,
    out_dir: Optional[Union[str, Path]] = None,
    seed: Optional[int] = None,
    jobs: int = 1,
    verify_oracles: bool = False,
) -> Report:
    """
    Run one experiment (or "all") and write its outputs

    Args:
        config: Experiment config
        which: Experiment name or "all"
        out_dir: Run directory (nothing is written when None)
        seed: Root seed override
        jobs: Worker processes for the ensemble instances
        verify_oracles: Also run the global packet checks

    Returns:
        Report; report.passed is False if any experiment failed or a constant left its baseline

    Raises:
        ConfigInconsistencyError: If the config cannot run, before any computation
        ValueError: If which names no experiment
    """
    if seed is not None:
        config = config.model_copy(update={"seed": seed})
    names = config.experiments(which)
    check_config(config, names)
    started = datetime.now(timezone.utc)
    clock = time.perf_counter()
    storage = get_storage_service(out_dir) if out_dir is not None else None
    report = Report(config=config)

    for name in names:
        logger.info(f"Starting experiment {name} ({config.ensemble.size(name)} instances, jobs={jobs})")
        tick = time.perf_counter()
        try:
            outcomes = _run_ensemble(config, name, jobs)
            record = _summarize(name, outcomes)
            if storage is not None:
                _write_outputs(storage, record, outcomes)
        except Exception as e:
            logger.error(f"Experiment {name} failed: {str(e)}")
            record = ExperimentRecord(name=name, status="failed", error=f"{type(e).__name__}: {e}")
        finally:
            logger.info(f"Experiment {name} finished in {time.perf_counter() - tick:.2f}s")
        report.experiments.append(record)

    if verify_oracles:
        try:
            report.experiments.append(_packet_contracts(build_context(config.model_dump_json())))
        except Exception as e:
            logger.error(f"Packet contract checks failed: {str(e)}")
            report.experiments.append(ExperimentRecord(name="packet-contracts", status="failed", error=str(e)))

    constants = {k: v for record in report.experiments for k, v in record.constants.items()}
    report.constants = pin_constants(constants, config.baseline)
    report.passed = all(r.passed for r in report.experiments) and all(c.status != "pinned-fail" for c in report.constants)
    report.meta = RunMeta(
        version=get_settings().app_version,
        started_at=started,
        elapsed_sec=time.perf_counter() - clock,
        jobs=jobs,
        verify_oracles=verify_oracles,
    )
    if storage is not None:
        path = storage.save_report(report)
        logger.info(f"Report written to {path}")
    return report


def baseline_payload(report: Report) -> Dict[str, float]:
    """Measured constants of a report, in the form config.baseline expects"""
    return {c.name: c.value for c in report.constants if np.isfinite(c.value)}
