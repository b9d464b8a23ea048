"""
Config Consistency Verification Utility

Checks an experiment config before any computation and gives a clear error
message listing every inconsistency found.
"""
import logging
from fractions import Fraction
from typing import Dict, List, Sequence

from src.schemas.experiment import ExperimentConfig

logger = logging.getLogger(__name__)


class ConfigInconsistencyError(ValueError):
    """Raised when an experiment config cannot be run as given"""
    pass


def config_problems(config: ExperimentConfig) -> List[str]:
    """
    All consistency problems of a config (empty when it can run)

    Checks grid resolution against the finest scale, box length against the
    coarsest scale, box containment, frequency span, r, target measure and
    the random tile count.
    """
    from src.models.tile import TileError, generate_universe
    from src.services.analysis.multipliers import get_multiplier

    problems = []
    n = config.dim
    grid = config.grid
    uni = config.universe
    time_box, freq_box = uni.time_cube, uni.freq_cube
    h_log2 = grid.log2_length - grid.log2_points

    if time_box.dim != n or freq_box.dim != n:
        problems.append(f"boxes must have dim {n}, got {time_box.dim} and {freq_box.dim}")
        return problems
    if uni.k_min > uni.k_max:
        problems.append(f"k_min ({uni.k_min}) must be <= k_max ({uni.k_max})")
    if h_log2 > uni.k_min - 3:
        problems.append(f"grid spacing 2^{h_log2} must be at most 2^{uni.k_min}/8")
    if grid.log2_length < uni.k_max + 2:
        problems.append(f"box length 2^{grid.log2_length} must be at least 4·2^{uni.k_max}")

    half = Fraction(2) ** (grid.log2_length - 1)
    if any(lo < -half for lo in time_box.lower()) or any(hi > half for hi in time_box.upper()):
        problems.append(f"time box {uni.time_box} leaves the grid box [−{half}, {half})^{n}")

    span = Fraction(1 << grid.log2_points, 2) / Fraction(2) ** grid.log2_length
    if not span > Fraction(1, 10):
        problems.append(f"frequency span {float(span)} must exceed 1/10")
    if any(lo < -span for lo in freq_box.lower()) or any(hi > span for hi in freq_box.upper()):
        problems.append(f"frequency box {uni.freq_box} leaves the frequency span ±{float(span)}")

    if not 2 <= config.r <= 2 ** n:
        problems.append(f"r must lie in 2..{2 ** n}, got {config.r}")
    if config.target_measure > float(time_box.volume()):
        problems.append(
            f"target measure {config.target_measure} exceeds the window measure {float(time_box.volume())}"
        )
    try:
        get_multiplier(config.multiplier, n)
    except ValueError as e:
        problems.append(str(e))

    if not problems:
        try:
            size = len(generate_universe(n, uni.k_min, uni.k_max, time_box, freq_box))
        except TileError as e:
            problems.append(str(e))
        else:
            if size == 0:
                problems.append("the universe is empty")
            elif config.tile_count > size:
                problems.append(f"tile_count {config.tile_count} exceeds the universe size {size}")
    return problems


def check_config(config: ExperimentConfig, experiments: Sequence[str] = ()) -> Dict[str, object]:
    """
    Verify a config for the given experiments

    Returns:
        Dict with 'grid', 'universe' and 'experiments' summaries

    Raises:
        ConfigInconsistencyError: If any check fails
    """
    problems = config_problems(config)
    for name in experiments:
        if config.ensemble.size(name) < 1:
            problems.append(f"ensemble for {name} is empty")
    if problems:
        raise ConfigInconsistencyError(
            "Inconsistent experiment config:\n" + "\n".join(f"- {p}" for p in problems)
        )
    result = {
        "grid": f"L=2^{config.grid.log2_length}, N=2^{config.grid.log2_points} per axis",
        "universe": f"k in [{config.universe.k_min}, {config.universe.k_max}], {config.universe.time_box} × {config.universe.freq_box}",
        "experiments": ", ".join(experiments) or "none",
    }
    logger.info(f"config check passed: {result}")
    return result
