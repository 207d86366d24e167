"""End-to-end command-line behavior, run in process via main()."""

import json
import math
import xml.etree.ElementTree as ET

import pytest

from dimer_hysteresis import (EtaSchedule, ModelParams, R_THRESHOLD,
                              trajectory_from_csv)
from dimer_hysteresis.cli import main
from dimer_hysteresis.config import ENV_VAR
from dimer_hysteresis.serialize import TRAJECTORY_HEADER, trajectory_to_csv


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch):
    monkeypatch.delenv(ENV_VAR, raising=False)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSimulate:
    def test_csv_round_trip(self, capsys, tmp_path):
        out = tmp_path / "traj.csv"
        code, _, err = run_cli(
            capsys, "simulate", "--r", "1", "--schedule", "constant",
            "--eta-start", "-1", "--T", "10", "--out", str(out))
        assert code == 0, err
        text = out.read_text()
        assert text.splitlines()[0] == TRAJECTORY_HEADER
        traj = trajectory_from_csv(
            text, ModelParams(r=1.0, nu=0.0),
            EtaSchedule(kind="constant", eta_start=-1.0, T=10.0))
        assert trajectory_to_csv(traj) == text
        assert traj.samples[-1].tau == 10.0

    def test_stdout_when_no_out_flag(self, capsys):
        code, out, _ = run_cli(
            capsys, "simulate", "--r", "1", "--schedule", "constant",
            "--eta-start", "-1", "--T", "5")
        assert code == 0
        assert out.splitlines()[0] == TRAJECTORY_HEADER
        assert len(out.splitlines()) == 7

    def test_zero_seed_stays_symmetric(self, capsys):
        code, out, _ = run_cli(
            capsys, "simulate", "--r", "5", "--z0", "0", "--schedule",
            "constant", "--eta-start", "-8", "--T", "5")
        assert code == 0
        for line in out.splitlines()[1:]:
            assert line.split(",")[2] == "0"

    def test_plot_is_valid_svg(self, capsys, tmp_path):
        plot = tmp_path / "traj.svg"
        code, _, _ = run_cli(
            capsys, "simulate", "--r", "1", "--schedule", "constant",
            "--eta-start", "-3", "--z0", "0.3", "--T", "20",
            "--out", str(tmp_path / "t.csv"), "--plot", str(plot))
        assert code == 0
        root = ET.fromstring(plot.read_text())
        assert root.tag.endswith("svg")
        assert len(plot.read_text()) > 500

    def test_invalid_seed_is_a_numerical_error(self, capsys):
        code, _, err = run_cli(
            capsys, "simulate", "--r", "1", "--z0", "1.5",
            "--schedule", "constant", "--T", "5")
        assert code == 1
        assert "error:" in err

    def test_triangular_needs_peak(self, capsys):
        code, _, err = run_cli(capsys, "simulate", "--r", "1", "--T", "5")
        assert code == 2
        assert "eta-peak" in err

    def test_missing_power_is_a_config_error(self, capsys):
        code, _, err = run_cli(capsys, "simulate", "--T", "5")
        assert code == 2
        assert "r" in err

    def test_malformed_float_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--r", "abc"])
        assert exc.value.code == 2


class TestBifurcate:
    def test_csv_and_sidecar(self, capsys, tmp_path):
        out = tmp_path / "branches.csv"
        code, _, err = run_cli(
            capsys, "bifurcate", "--r", "1", "--eta-min", "0.5",
            "--eta-max", "4", "--steps", "50", "--out", str(out))
        assert code == 0, err
        lines = out.read_text().splitlines()
        assert lines[0] == "branch_id,kind,theta_star,eta,z_star,stability"
        assert len(lines) > 50
        sidecar = tmp_path / "branches.json"
        doc = json.loads(sidecar.read_text())
        assert doc["eta_star"] == 2.0
        assert doc["eta_plus"] is None
        assert doc["classification"] == "supercritical"
        assert len(doc["branches"]) == 3
        assert doc["effective_config"]["steps"] == 50
        point = doc["branches"][0]["points"][0]
        assert set(point) == {"eta", "z_star", "stability", "eigenvalues"}

    def test_stdout_without_out_flag(self, capsys, tmp_path):
        code, out, _ = run_cli(
            capsys, "bifurcate", "--r", "2", "--eta-min", "0.1",
            "--eta-max", "1", "--steps", "20")
        assert code == 0
        assert out.startswith("branch_id,")
        assert not list(tmp_path.iterdir())

    def test_plot_is_valid_svg(self, capsys, tmp_path):
        plot = tmp_path / "diagram.svg"
        code, _, _ = run_cli(
            capsys, "bifurcate", "--r", "5", "--eta-min", "3",
            "--eta-max", "8", "--steps", "60",
            "--out", str(tmp_path / "b.csv"), "--plot", str(plot))
        assert code == 0
        root = ET.fromstring(plot.read_text())
        assert root.tag.endswith("svg")

    def test_missing_range_is_a_config_error(self, capsys):
        code, _, err = run_cli(capsys, "bifurcate", "--r", "1")
        assert code == 2
        assert "eta-m" in err


class TestCritical:
    def test_json_lines_per_power(self, capsys):
        code, out, _ = run_cli(capsys, "critical", "--r", "1", "--r", "4")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 2
        first, second = (json.loads(line) for line in lines)
        assert first["r"] == 1.0
        assert first["eta_star"] == 2.0
        assert first["eta_plus"] is None
        assert first["classification"] == "supercritical"
        assert second["eta_star"] == 4.0
        assert second["eta_plus"] == pytest.approx(3.674, abs=0.01)
        assert second["classification"] == "subcritical"
        assert first["effective_config"] == {"r": [1.0, 4.0]}

    def test_requires_a_power(self, capsys):
        code, _, err = run_cli(capsys, "critical")
        assert code == 2
        assert "--r" in err


class TestSweep:
    def test_threshold_mode(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--r-min", "3", "--r-max", "4",
            "--tol", "1e-4")
        assert code == 0
        doc = json.loads(out)
        assert abs(doc["r_threshold"] - R_THRESHOLD) < 1e-4
        assert doc["effective_config"]["tol"] == 1e-4

    def test_hysteresis_mode_null_case(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--hysteresis", "--r", "1", "--nu", "0.5",
            "--eta-peak", "-3")
        assert code == 0
        doc = json.loads(out)
        assert doc["detected"] is False
        assert doc["reference"]["eta_star"] == 2.0
        assert doc["reference"]["eta_plus"] is None
        assert len(doc["forward_trace"]) == 128

    def test_hysteresis_mode_detected_case(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        plot = tmp_path / "sweep.svg"
        code, _, err = run_cli(
            capsys, "sweep", "--hysteresis", "--r", "5", "--nu", "0.5",
            "--eta-start", "-3", "--eta-peak", "-8",
            "--out", str(out_path), "--plot", str(plot))
        assert code == 0, err
        doc = json.loads(out_path.read_text())
        assert doc["detected"] is True
        assert doc["window"] is not None
        lo, hi = doc["window"]
        assert lo < 6.4 < hi or lo < 4.41 < hi or (4.41 < lo and hi < 6.4) \
            or (lo < 4.41 and 6.4 < hi)
        root = ET.fromstring(plot.read_text())
        assert root.tag.endswith("svg")

    def test_needs_a_mode(self, capsys):
        code, _, err = run_cli(capsys, "sweep", "--r", "1")
        assert code == 2
        assert "hysteresis" in err


class TestConfigFile:
    def write_cfg(self, tmp_path, text):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(text)
        return cfg

    def test_file_supplies_defaults(self, capsys, tmp_path, monkeypatch):
        cfg = self.write_cfg(
            tmp_path,
            "# base run\nr = 1.0\nschedule = constant\n"
            "eta_start = -1.0\nT = 5.0\n")
        monkeypatch.setenv(ENV_VAR, str(cfg))
        code, out, _ = run_cli(capsys, "simulate")
        assert code == 0
        last = out.splitlines()[-1]
        assert float(last.split(",")[0]) == 5.0

    def test_cli_overrides_file(self, capsys, tmp_path, monkeypatch):
        cfg = self.write_cfg(
            tmp_path,
            "r = 1.0\nschedule = constant\neta-start = -1.0\nT = 5.0\n")
        monkeypatch.setenv(ENV_VAR, str(cfg))
        code, out, _ = run_cli(capsys, "simulate", "--T", "10")
        assert code == 0
        last = out.splitlines()[-1]
        assert float(last.split(",")[0]) == 10.0

    def test_underscore_and_dash_keys_equivalent(self, capsys, tmp_path,
                                                 monkeypatch):
        cfg = self.write_cfg(tmp_path, "r_min = 3.0\nr_max = 4.0\n")
        monkeypatch.setenv(ENV_VAR, str(cfg))
        code, out, _ = run_cli(capsys, "sweep")
        assert code == 0
        assert abs(json.loads(out)["r_threshold"] - R_THRESHOLD) < 1e-4

    def test_unknown_key_names_the_line(self, capsys, tmp_path, monkeypatch):
        cfg = self.write_cfg(tmp_path, "r = 1.0\nbogus = 3\n")
        monkeypatch.setenv(ENV_VAR, str(cfg))
        code, _, err = run_cli(capsys, "critical")
        assert code == 2
        assert "bogus" in err
        assert "2" in err
        assert cfg.name in err

    def test_duplicate_key_rejected(self, capsys, tmp_path, monkeypatch):
        cfg = self.write_cfg(tmp_path, "r = 1.0\nr = 2.0\n")
        monkeypatch.setenv(ENV_VAR, str(cfg))
        code, _, err = run_cli(capsys, "critical")
        assert code == 2
        assert "duplicate" in err

    def test_bad_value_rejected(self, capsys, tmp_path, monkeypatch):
        cfg = self.write_cfg(tmp_path, "r = abc\n")
        monkeypatch.setenv(ENV_VAR, str(cfg))
        code, _, err = run_cli(capsys, "critical")
        assert code == 2

    def test_missing_file_rejected(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv(ENV_VAR, str(tmp_path / "absent.cfg"))
        code, _, err = run_cli(capsys, "critical", "--r", "1")
        assert code == 2
