"""
Test Command Line Interface
"""
import json

import pytest

from src.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, main, resolve_jobs
from src.config import get_settings
from src.schemas.experiment import ExperimentConfig
from src.schemas.report import AcceptanceCheck, ConstantRecord, ExperimentRecord, Report


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def config_path(tmp_path, tiny_config_dict):
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(tiny_config_dict))
    return path


def _report(config_path, passed: bool) -> Report:
    config = ExperimentConfig.model_validate_json(config_path.read_text())
    return Report(
        config=config,
        experiments=[ExperimentRecord(name="sjolin", acceptance=[AcceptanceCheck(name="checks", passed=passed)])],
        constants=[ConstantRecord(name="sjolin_ratio_max", value=1.5)],
        passed=passed,
    )


def test_missing_config(tmp_path):
    code = main(["sjolin", "--config", str(tmp_path / "absent.json"), "--out", str(tmp_path / "run")])

    assert code == EXIT_CONFIG


def test_invalid_config(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dim": 2}))

    assert main(["sjolin", "--config", str(path), "--out", str(tmp_path / "run")]) == EXIT_CONFIG


def test_inconsistent_config(tmp_path, tiny_config_dict):
    tiny_config_dict["universe"]["k_max"] = 3
    path = tmp_path / "short.json"
    path.write_text(json.dumps(tiny_config_dict))

    assert main(["sjolin", "--config", str(path), "--out", str(tmp_path / "run")]) == EXIT_CONFIG


def test_unknown_experiment(config_path, tmp_path):
    with pytest.raises(SystemExit):
        main(["carleson", "--config", str(config_path), "--out", str(tmp_path / "run")])


@pytest.mark.parametrize("passed,code", [(True, EXIT_OK), (False, EXIT_FAILED)])
def test_exit_code_follows_report(config_path, tmp_path, passed, code, mocker):
    mock_run = mocker.patch("src.cli.run_experiment", return_value=_report(config_path, passed))

    result = main(["sjolin", "--config", str(config_path), "--out", str(tmp_path / "run"), "--seed", "3"])

    assert result == code
    kwargs = mock_run.call_args[1]
    assert kwargs["seed"] == 3
    assert kwargs["jobs"] == 1
    assert not kwargs["verify_oracles"]


def test_write_baseline(config_path, tmp_path, mocker):
    baseline = tmp_path / "baselines" / "tiny.json"
    mocker.patch("src.cli.run_experiment", return_value=_report(config_path, True))

    main([
        "sjolin", "--config", str(config_path), "--out", str(tmp_path / "run"),
        "--write-baseline", str(baseline),
    ])

    assert json.loads(baseline.read_text()) == {"sjolin_ratio_max": 1.5}


def test_all_exits_ok(config_path, tmp_path):
    run_dir = tmp_path / "run"

    code = main(["all", "--config", str(config_path), "--out", str(run_dir)])

    assert code == EXIT_OK
    assert (run_dir / "report.json").exists()
    assert list((run_dir / "certificates").glob("certificate-*.json"))


class TestResolveJobs:
    def test_cli_value_without_env(self, monkeypatch):
        monkeypatch.delenv("TILETREE_JOBS", raising=False)

        assert resolve_jobs(4) == 4

    def test_env_takes_precedence(self, monkeypatch):
        monkeypatch.setenv("TILETREE_JOBS", "3")

        assert resolve_jobs(1) == 3

    def test_at_least_one(self, monkeypatch):
        monkeypatch.delenv("TILETREE_JOBS", raising=False)

        assert resolve_jobs(0) == 1

    def test_env_reaches_run(self, config_path, tmp_path, monkeypatch, mocker):
        monkeypatch.setenv("TILETREE_JOBS", "2")

        mock_run = mocker.patch("src.cli.run_experiment", return_value=_report(config_path, True))
        main(["sjolin", "--config", str(config_path), "--out", str(tmp_path / "run"), "--jobs", "5"])

        assert mock_run.call_args[1]["jobs"] == 2
