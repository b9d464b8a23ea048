"""
Command Line Interface

Usage:
    tiletree <experiment|all> --config <path> --out <dir> [--seed N] [--jobs N]
             [--verify-oracles] [--write-baseline <path>]

Exit codes: 0 when every acceptance check passes, 1 on failure, 2 on a
config error.
"""
import argparse
import json
import logging
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from src.config import get_settings
from src.schemas.experiment import EXPERIMENTS, ExperimentConfig
from src.tasks.experiments import baseline_payload, run_experiment
from src.utils.config_check import ConfigInconsistencyError
from src.utils.logger import level_from_name, setup_logger

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tiletree", description="Run time-frequency tile experiments")
    parser.add_argument("experiment", choices=list(EXPERIMENTS) + ["all"], help="Experiment to run")
    parser.add_argument("--config", required=True, type=Path, help="JSON experiment config")
    parser.add_argument("--out", required=True, type=Path, help="Run directory for the report and data files")
    parser.add_argument("--seed", type=int, default=None, help="Root seed override")
    parser.add_argument("--jobs", type=int, default=1, help="Worker processes (TILETREE_JOBS takes precedence)")
    parser.add_argument(
        "--verify-oracles",
        action="store_true",
        help="Also run the global packet contract checks",
    )
    parser.add_argument(
        "--write-baseline",
        type=Path,
        default=None,
        help="Write the measured constants to this JSON file",
    )
    return parser


def resolve_jobs(cli_jobs: int) -> int:
    """TILETREE_JOBS when set, else the --jobs value"""
    env_jobs = get_settings().jobs
    jobs = env_jobs if env_jobs is not None else cli_jobs
    return max(1, int(jobs))


def load_config(path: Path) -> ExperimentConfig:
    """
    Raises:
        FileNotFoundError: If the file does not exist
        ValidationError: If the JSON does not describe an ExperimentConfig
    """
    if not path.exists():
        raise FileNotFoundError(f"Config not found: {path}")
    return ExperimentConfig.model_validate_json(path.read_text())


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    setup_logger("src", level_from_name(settings.log_level))

    try:
        config = load_config(args.config)
    except (FileNotFoundError, ValidationError) as e:
        logger.error(f"Invalid config {args.config}: {str(e)}")
        return EXIT_CONFIG

    jobs = resolve_jobs(args.jobs)
    logger.info(f"=== tiletree {settings.app_version}: {args.experiment} ===")
    try:
        report = run_experiment(
            config,
            args.experiment,
            out_dir=args.out,
            seed=args.seed,
            jobs=jobs,
            verify_oracles=args.verify_oracles,
        )
    except ConfigInconsistencyError as e:
        logger.error(str(e))
        return EXIT_CONFIG

    for record in report.experiments:
        status = "PASS" if record.passed else "FAIL"
        constants = ", ".join(f"{k}={v:.4g}" for k, v in record.constants.items())
        logger.info(f"{record.name}: {status} {constants}")
    for constant in report.constants:
        if constant.status == "pinned-fail":
            logger.warning(f"{constant.name} left its baseline: {constant.value:.4g} vs {constant.baseline:.4g}")

    if args.write_baseline is not None:
        args.write_baseline.parent.mkdir(parents=True, exist_ok=True)
        args.write_baseline.write_text(json.dumps(baseline_payload(report), indent=2, sort_keys=True))
        logger.info(f"Baseline written to {args.write_baseline}")

    return EXIT_OK if report.passed else EXIT_FAILED
