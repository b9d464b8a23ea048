"""
Test Experiment Tasks
"""
import csv
import json

import pytest

from src.schemas.experiment import EXPERIMENTS, ExperimentConfig
from src.schemas.report import ConstantRecord, Report
from src.tasks import experiments
from src.tasks.experiments import baseline_payload, pin_constants, run_experiment
from src.utils.config_check import ConfigInconsistencyError


@pytest.fixture
def tiny_config(tiny_config_dict):
    return ExperimentConfig.model_validate(tiny_config_dict)


class TestPinConstants:
    def test_unpinned_without_baseline(self):
        [record] = pin_constants({"C1": 3.0}, {})

        assert record.status == "unpinned"
        assert record.baseline is None

    @pytest.mark.parametrize("value,status", [(1.1, "pinned-ok"), (0.85, "pinned-ok"), (1.21, "pinned-fail")])
    def test_tight_slack(self, value, status):
        [record] = pin_constants({"C1": value}, {"C1": 1.0})

        assert record.status == status
        assert record.slack == pytest.approx(0.20)

    @pytest.mark.parametrize("value,status", [(1.24, "pinned-ok"), (1.3, "pinned-fail")])
    def test_wide_slack(self, value, status):
        [record] = pin_constants({"C3": value}, {"C3": 1.0})

        assert record.status == status
        assert record.slack == pytest.approx(0.25)

    def test_sorted_by_name(self):
        records = pin_constants({"C3": 1.0, "C0": 2.0, "C_bessel": 0.5}, {})

        assert [r.name for r in records] == ["C0", "C3", "C_bessel"]


def test_baseline_payload_skips_infinite(tiny_config):
    report = Report(
        config=tiny_config,
        constants=[ConstantRecord(name="C1", value=2.0), ConstantRecord(name="C_claim1", value=float("inf"))],
    )

    assert baseline_payload(report) == {"C1": 2.0}


class TestRunExperiment:
    def test_sjolin_passes_and_writes_outputs(self, tiny_config, tmp_path):
        report = run_experiment(tiny_config, "sjolin", out_dir=tmp_path)

        [record] = report.experiments
        assert record.name == "sjolin"
        assert record.passed
        assert report.passed
        assert "sjolin_ratio_max" in record.constants
        assert report.meta.jobs == 1
        with open(tmp_path / "tables" / "sjolin.csv", newline="") as f:
            rows = list(csv.DictReader(f))
        assert len(rows) == 1
        assert rows[0]["checks_passed"] == "3/3"
        saved = json.loads((tmp_path / "report.json").read_text())
        assert saved["experiments"][0]["name"] == "sjolin"

    def test_deterministic_body(self, tiny_config):
        first = run_experiment(tiny_config, "bessel")
        second = run_experiment(tiny_config, "bessel")

        assert first.body_json() == second.body_json()

    def test_seed_override(self, tiny_config):
        report = run_experiment(tiny_config, "bessel", seed=99)

        assert report.config.seed == 99
        assert [i.instance for i in report.experiments[0].instances] == [0, 1]

    def test_decompose_writes_certificates(self, tiny_config, tmp_path):
        report = run_experiment(tiny_config, "decompose", out_dir=tmp_path)

        [record] = report.experiments
        assert record.status == "completed"
        assert (tmp_path / "tables" / "decompose.csv").exists()
        certificates = list((tmp_path / "certificates").glob("certificate-*.json"))
        assert len(certificates) == len(record.instances)
        assert not list((tmp_path / "tables").glob("certificate-*.json"))

    def test_constant_outside_baseline_fails_report(self, tiny_config_dict):
        tiny_config_dict["baseline"] = {"sjolin_ratio_max": 1e6}
        config = ExperimentConfig.model_validate(tiny_config_dict)

        report = run_experiment(config, "sjolin")

        assert report.experiments[0].passed
        assert report.constants[0].status == "pinned-fail"
        assert not report.passed

    def test_inconsistent_config_raises_before_running(self, tiny_config_dict, mocker):
        tiny_config_dict["r"] = 5
        config = ExperimentConfig.model_validate(tiny_config_dict)
        runner = mocker.MagicMock()
        mocker.patch.dict(experiments.RUNNERS, {"sjolin": runner})

        with pytest.raises(ConfigInconsistencyError):
            run_experiment(config, "sjolin")

        runner.assert_not_called()

    def test_failed_experiment_recorded(self, tiny_config, mocker):
        mocker.patch.dict(experiments.RUNNERS, {"sjolin": mocker.MagicMock(side_effect=RuntimeError("boom"))})

        report = run_experiment(tiny_config, "sjolin")

        [record] = report.experiments
        assert record.status == "failed"
        assert record.error == "RuntimeError: boom"
        assert not report.passed

    def test_jobs_use_process_pool(self, tiny_config, mocker):
        mock_pool_cls = mocker.patch("src.tasks.experiments.ProcessPoolExecutor")
        pool = mock_pool_cls.return_value.__enter__.return_value
        pool.map.side_effect = map

        report = run_experiment(tiny_config, "sjolin", jobs=2)

        mock_pool_cls.assert_called_once_with(max_workers=2)
        pool.map.assert_called_once()
        assert report.meta.jobs == 2
        assert len(report.experiments[0].instances) == 1

    def test_all_passes(self, tiny_config, tmp_path):
        report = run_experiment(tiny_config, "all", out_dir=tmp_path)

        assert [r.name for r in report.experiments] == list(EXPERIMENTS)
        failed = [(r.name, a.name, a.detail) for r in report.experiments for a in r.acceptance if not a.passed]
        assert not failed
        assert report.passed

    @pytest.mark.parametrize("name", ["tree-inequality", "claim1"])
    def test_tree_experiments_nonvacuous(self, tiny_config, name):
        report = run_experiment(tiny_config, name)

        [record] = report.experiments
        [check] = [a for a in record.acceptance if a.name == "lhs-positive"]
        assert check.passed
        assert max(i.values["lhs"] for i in record.instances) > 0

    def test_verify_oracles_adds_packet_contracts(self, tiny_config):
        report = run_experiment(tiny_config, "sjolin", verify_oracles=True)

        contracts = report.experiments[-1]
        assert contracts.name == "packet-contracts"
        assert contracts.passed
        assert contracts.diagnostics["norm_spread"] <= 1e-8
        assert report.meta.verify_oracles
