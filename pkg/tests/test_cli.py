import json
import math
import subprocess
import sys

import numpy as np
import pytest

from compass_cqed.cli import main, read_config
from compass_cqed.export import read_grid_csv


def run(*argv):
    return main([str(a) for a in argv])


def load(path):
    return json.loads(path.read_text(encoding="utf-8"))


class TestWignerCommand:
    def test_large_compass_shows_chessboard(self, tmp_path):
        assert run("wigner", "--state", "compass", "--alpha", 5, "--bounds", 8, "--res", 321, "--out", tmp_path) == 0
        tiles = load(tmp_path / "wigner_tiles.json")
        assert tiles["tile_report"]["has_chessboard"] is True
        assert tiles["tile_report"]["tile_area_over_vacuum_footprint"] < 1
        meta = load(tmp_path / "wigner.json")
        assert meta["resolution"] == {"nx": 321, "np": 321}
        assert meta["integral"] == pytest.approx(1.0, abs=2e-3)
        assert meta["config"]["alpha"] == 5.0

    def test_small_compass_has_none(self, tmp_path):
        assert run("wigner", "--alpha", 1, "--out", tmp_path) == 0
        assert load(tmp_path / "wigner_tiles.json")["tile_report"]["has_chessboard"] is False

    def test_vacuum_gaussian(self, tmp_path):
        assert run("wigner", "--state", "coherent", "--alpha", 0, "--out", tmp_path) == 0
        g = read_grid_csv(tmp_path / "wigner.csv")
        assert g.values.max() == pytest.approx(2 / math.pi, abs=1e-12)
        assert load(tmp_path / "wigner.json")["integral"] == pytest.approx(1.0, abs=2e-3)

    def test_deterministic_bytes(self, tmp_path):
        for d in ("a", "b"):
            assert run("wigner", "--state", "cat", "--alpha", 2, "--res", 121, "--out", tmp_path / d) == 0
        assert (tmp_path / "a" / "wigner.csv").read_bytes() == (tmp_path / "b" / "wigner.csv").read_bytes()

    def test_unknown_state(self, tmp_path, capsys):
        assert run("wigner", "--state", "squeezed", "--out", tmp_path) == 2
        assert "unknown state" in capsys.readouterr().err

    def test_coarse_grid_is_numeric_failure_after_writing_grid(self, tmp_path, capsys):
        assert run("wigner", "--alpha", 5, "--res", 41, "--out", tmp_path) == 1
        assert "GridTooCoarse" in capsys.readouterr().err
        assert (tmp_path / "wigner.csv").exists() and (tmp_path / "wigner.json").exists()

    def test_negative_alpha_is_usage_error(self, tmp_path):
        assert run("wigner", "--alpha", -1, "--out", tmp_path) == 2


class TestProtocolCommand:
    def test_prepare(self, tmp_path):
        assert run("protocol", "--alpha", 2, "--out", tmp_path) == 0
        out = load(tmp_path / "protocol_prepare.json")
        assert out["fidelity_with_compass"] == pytest.approx(1.0, abs=1e-10)

    def test_violated_phase_is_numeric_failure(self, tmp_path, capsys):
        assert run("protocol", "--phi", 0.3, "--out", tmp_path) == 1
        assert "PhaseConditionViolated" in capsys.readouterr().err

    def test_no_strict(self, tmp_path):
        assert run("protocol", "--phi", 0.3, "--no-strict", "--out", tmp_path) == 0
        assert load(tmp_path / "protocol_prepare.json")["fidelity_with_compass"] < 1

    def test_scan(self, tmp_path):
        assert run("protocol", "--mode", "scan", "--scan-res", 12, "--out", tmp_path) == 0
        data = np.loadtxt(tmp_path / "fringe_scan.csv", delimiter=",", skiprows=1)
        assert data.shape == (144, 3)
        assert (tmp_path / "fringe_scan.csv").read_text().startswith("theta1,theta2,P\n")
        # offsets are written in units of pi
        assert data[:, 0].max() == pytest.approx(2 * 11 / 12)
        assert load(tmp_path / "fringe_scan.json")["contrast"] > 0.1

    def test_complete(self, tmp_path):
        assert run("protocol", "--mode", "complete", "--theta-a", 0.1, "--out", tmp_path) == 0
        out = load(tmp_path / "protocol_outcomes.json")
        assert out["sum"] == pytest.approx(1.0, abs=1e-10)
        assert set(out["probabilities"]) == {"++", "+-", "-+", "--"}

    def test_radians(self, tmp_path):
        assert run("protocol", "--radians", "--phi", math.pi / 4, "--phi-prime", math.pi / 2,
                   "--theta-a", math.pi / 4, "--theta-b", math.pi / 2, "--out", tmp_path) == 0
        assert load(tmp_path / "protocol_prepare.json")["config"]["radians"] is True


class TestDecohereCommand:
    def test_curve_and_snapshots(self, tmp_path):
        assert run("decohere", "--alpha", 1.5, "--kt-max", 0.5, "--kt-points", 6, "--snapshots", "0,0.2",
                   "--res", 81, "--out", tmp_path) == 0
        data = np.loadtxt(tmp_path / "decay_curve.csv", delimiter=",", skiprows=1)
        kt, cf = data[:, 0], data[:, 1]
        assert np.allclose(cf, np.exp(-2 * 1.5**2 * (1 - np.exp(-kt))), rtol=1e-14)
        assert np.all(np.diff(data[:, 3]) < 0)
        assert load(tmp_path / "snapshot_kt0.json")["fidelity_with_compass"] == pytest.approx(1.0, abs=1e-10)
        assert load(tmp_path / "snapshot_kt0.2.json")["fidelity_with_compass"] < 1

    def test_oracle_check(self, tmp_path):
        assert run("decohere", "--alpha", 1, "--kt-max", 0.1, "--kt-points", 3, "--res", 41,
                   "--oracle-check", "--out", tmp_path) == 0
        meta = load(tmp_path / "decay_curve.json")
        assert meta["oracle_max_trace_distance"] <= 1e-6 and meta["oracle_pass"] is True

    def test_bad_snapshot_list(self, tmp_path):
        assert run("decohere", "--snapshots", "0,x", "--res", 41, "--kt-points", 2, "--out", tmp_path) == 2


class TestProbeCommand:
    def test_ordering(self, tmp_path):
        assert run("probe", "--alpha", 4, "--oracle-check", "--out", tmp_path) == 0
        summary = load(tmp_path / "probe_summary.json")
        assert summary["ordering_compass_lt_cat_lt_coherent"] is True
        assert summary["oracle_pass"] is True
        assert (tmp_path / "probe_compass.csv").read_text().startswith("gt,P_gg,P_ge\n")
        assert load(tmp_path / "probe_cat.json")["revival_time"] > 0

    def test_vacuum_is_flat(self, tmp_path):
        assert run("probe", "--alpha", 0, "--gt-max", 20, "--samples", 101, "--out", tmp_path) == 0
        data = np.loadtxt(tmp_path / "probe_coherent.csv", delimiter=",", skiprows=1)
        assert np.all(data[:, 1] == 1.0)
        summary = load(tmp_path / "probe_summary.json")
        assert summary["revival_times"]["coherent"] is None
        assert summary["ordering_compass_lt_cat_lt_coherent"] is False


class TestConfigFile:
    def test_precedence(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# compass at |alpha| = 2\nalpha = 2\nres = 121\nstate = cat\n", encoding="utf-8")
        assert run("wigner", "--config", cfg, "--state", "compass", "--out", tmp_path) == 0
        resolved = load(tmp_path / "wigner.json")["config"]
        assert resolved["alpha"] == 2.0  # from the file
        assert resolved["state"] == "compass"  # the flag wins
        assert resolved["alpha_phase"] == 0.0  # default
        assert resolved["res"] == 121

    def test_out_and_dashes(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(f"out = {tmp_path / 'o'}\nscan-res = 4\nmode = scan\n", encoding="utf-8")
        assert run("protocol", "--config", cfg) == 0
        assert (tmp_path / "o" / "fringe_scan.csv").exists()

    def test_unknown_key(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("colour = red\n", encoding="utf-8")
        assert run("wigner", "--config", cfg, "--out", tmp_path) == 2

    def test_malformed_line(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("alpha 2\n", encoding="utf-8")
        assert run("wigner", "--config", cfg, "--out", tmp_path) == 2

    def test_missing_file(self, tmp_path):
        assert run("wigner", "--config", tmp_path / "nope.cfg", "--out", tmp_path) == 2

    def test_parser(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("a = 1  # trailing\n\n  b-c =x\n", encoding="utf-8")
        assert read_config(cfg) == {"a": "1", "b_c": "x"}


def test_argparse_usage_error_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["wigner", "--alpha", "abc"])
    assert exc.value.code == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "compass_cqed", "protocol", "--mode", "complete", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "sum 1.0000000000" in proc.stdout


def test_missing_subcommand():
    proc = subprocess.run([sys.executable, "-m", "compass_cqed"], capture_output=True, text=True)
    assert proc.returncode == 2
