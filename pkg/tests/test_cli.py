"""End-to-end tests of the ``hpl`` command through ``main``."""

import json

import numpy as np
import pandas as pd
import pytest

from hpl_phasor.cli import main
from hpl_phasor.design.serialization import load_bank, save_bank
from hpl_phasor.estimation.io import write_samples

from .conftest import REFERENCE, make_config, steady_signal

AMPLITUDES = {1: 1.0, 3: 0.1, 11: 0.05}
PHASES = {1: 0.2, 3: -2.0, 11: 1.0}


def write_json(path, document) -> str:
    path.write_text(json.dumps(document))
    return str(path)


@pytest.fixture
def tft_bank_file(tft_bank, tmp_path):
    return str(save_bank(tft_bank, tmp_path / "tft.json"))


class TestDesignCommand:
    def test_writes_bank_and_manifest(self, tmp_path, capsys):
        config = write_json(tmp_path / "design.json", {"model": REFERENCE, "design": {"orders": [2, 3]}})
        out = tmp_path / "bank.json"
        baseline = tmp_path / "tft.json"
        curves = tmp_path / "curves.csv"
        args = ["design", "--config", config, "--out", str(out)]
        code = main(args + ["--baseline", str(baseline), "--curves", str(curves)])
        assert code == 0
        bank = load_bank(out)
        assert bank.kind == "svd-optimized"
        assert [row.order for row in bank.design_report.rows] == [2, 3]
        assert load_bank(baseline).kind == "tft"
        manifest = json.loads((tmp_path / "bank.json.manifest.json").read_text())
        assert manifest["command"] == "design"
        assert str(curves) in manifest["outputs"]
        assert set(pd.read_csv(curves).h) == set(range(2, 14))
        assert "2" in capsys.readouterr().out

    def test_repeat_run_writes_identical_bank(self, tmp_path):
        config = write_json(tmp_path / "design.json", {"model": REFERENCE, "design": {"orders": [5]}})
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["design", "--config", config, "--out", str(first)]) == 0
        assert main(["design", "--config", config, "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_short_window_is_a_config_error(self, tmp_path):
        model = {**REFERENCE, "window_cycles": 2, "taylor_order": 1}
        config = write_json(tmp_path / "design.json", {"model": model})
        assert main(["design", "--config", config, "--out", str(tmp_path / "bank.json")]) == 2
        assert not (tmp_path / "bank.json").exists()

    def test_inconsistent_model(self, tmp_path):
        model = {**REFERENCE, "reporting_rate_hz": 30.0}
        config = write_json(tmp_path / "design.json", {"model": model})
        assert main(["design", "--config", config, "--out", str(tmp_path / "bank.json")]) == 2

    def test_missing_config(self, tmp_path):
        assert main(["design", "--config", str(tmp_path / "absent.json"), "--out", str(tmp_path / "b.json")]) == 2


class TestEstimateCommand:
    def test_recovers_amplitudes(self, tft_bank_file, tmp_path):
        samples = steady_signal(make_config(), AMPLITUDES, PHASES, duration_s=0.5)
        sample_file = write_samples(tmp_path / "samples.txt", samples, 10000.0)
        out = tmp_path / "phasors.csv"
        assert main(["estimate", "--bank", tft_bank_file, "--input", str(sample_file), "--out", str(out)]) == 0
        frame = pd.read_csv(out)
        assert frame.t_tag.nunique() == 22
        for h, amplitude in AMPLITUDES.items():
            rows = frame[frame.h == h]
            assert np.max(np.abs(rows.amplitude - amplitude)) <= 1e-6
        assert np.max(frame[frame.h == 2].amplitude) <= 1e-6
        manifest = json.loads((tmp_path / "phasors.csv.manifest.json").read_text())
        assert manifest["frames"] == 22

    def test_short_input(self, tft_bank_file, tmp_path):
        sample_file = write_samples(tmp_path / "samples.txt", np.zeros(100), 10000.0)
        out = tmp_path / "phasors.csv"
        assert main(["estimate", "--bank", tft_bank_file, "--input", str(sample_file), "--out", str(out)]) == 0
        assert pd.read_csv(out).empty
        manifest = json.loads((tmp_path / "phasors.csv.manifest.json").read_text())
        assert manifest["frames"] == 0
        assert manifest["warnings"]

    def test_sampling_rate_mismatch(self, tft_bank_file, tmp_path):
        sample_file = write_samples(tmp_path / "samples.txt", np.zeros(5000), 5000.0)
        args = ["estimate", "--bank", tft_bank_file, "--input", str(sample_file)]
        code = main(args + ["--out", str(tmp_path / "p.csv")])
        assert code == 2

    def test_malformed_bank(self, tmp_path):
        bank = tmp_path / "bank.json"
        bank.write_text("{}")
        sample_file = write_samples(tmp_path / "samples.txt", np.zeros(700), 10000.0)
        code = main(["estimate", "--bank", str(bank), "--input", str(sample_file), "--out", str(tmp_path / "p.csv")])
        assert code == 2


class TestBenchCommand:
    def scenario(self, tmp_path, **fields):
        document = {"kind": "noise_obi", "rng_seed": 5, "model": REFERENCE, "run_seconds": 0.5}
        document.update(fields)
        return write_json(tmp_path / "scenario.json", document)

    def test_writes_results(self, tft_bank_file, tmp_path, capsys):
        scenario = self.scenario(tmp_path, sweep={"start": 60.0, "stop": 70.0, "step": 10.0})
        out = tmp_path / "results"
        args = ["bench", "--config", scenario, "--bank", tft_bank_file, "--baseline", tft_bank_file]
        assert main(args + ["--out", str(out), "--seed", "9", "--trace"]) == 0
        points = pd.read_csv(out / "points.csv")
        assert len(points) == 2 * 12
        assert list(pd.read_csv(out / "summary.csv").h) == list(range(2, 14))
        assert (out / "trace.csv").exists()
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["seeds"] == {"rng_seed": 9}
        assert "max_tve_percent" in capsys.readouterr().out

    def test_unknown_kind(self, tft_bank_file, tmp_path):
        scenario = self.scenario(tmp_path, kind="flicker")
        args = ["bench", "--config", scenario, "--bank", tft_bank_file, "--baseline", tft_bank_file]
        assert main(args + ["--out", str(tmp_path / "results")]) == 2

    def test_model_mismatch(self, tft_bank_file, tmp_path):
        scenario = self.scenario(tmp_path, model={**REFERENCE, "window_cycles": 5, "taylor_order": 4})
        args = ["bench", "--config", scenario, "--bank", tft_bank_file, "--baseline", tft_bank_file]
        assert main(args + ["--out", str(tmp_path / "results")]) == 2


class TestVerifyCommand:
    def test_default_grid_passes(self, tmp_path, capsys):
        config = write_json(tmp_path / "verify.json", {})
        out = tmp_path / "verify-report.json"
        assert main(["verify", "--config", config, "--out", str(out)]) == 0
        document = json.loads(out.read_text())
        assert document["passed"] is True
        assert len(document["reports"]) == 5
        assert capsys.readouterr().out.count("PASS") == 5

    def test_single_shape_prints_singular_values(self, tmp_path, capsys):
        config = write_json(tmp_path / "verify.json", {"grid": [{"window_cycles": 3, "taylor_order": 2}]})
        assert main(["verify", "--config", config]) == 0
        line = next(text for text in capsys.readouterr().out.splitlines() if "singular values" in text)
        assert len(line.split(":")[1].split()) == 3

    def test_invalid_shape(self, tmp_path):
        config = write_json(tmp_path / "verify.json", {"grid": [{"window_cycles": 1, "taylor_order": 2}]})
        assert main(["verify", "--config", config]) == 2

    def test_not_json(self, tmp_path):
        config = tmp_path / "verify.json"
        config.write_text("grid: [3, 2]")
        assert main(["verify", "--config", str(config)]) == 2


class TestParser:
    def test_command_required(self):
        with pytest.raises(SystemExit):
            main([])
