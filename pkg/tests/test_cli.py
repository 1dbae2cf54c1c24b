import csv
import json

import pytest

from spinboson.cli import RunConfig, UsageError, main, parse_grid, read_config_file


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_parse_grid():
    assert parse_grid("0.2") == (0.2,)
    assert parse_grid("0.05, 0.1") == (0.05, 0.1)
    assert parse_grid("0:0.3:0.1") == (0.0, 0.1, 0.2, 0.3)
    with pytest.raises(UsageError):
        parse_grid("1:0:0.1")
    with pytest.raises(UsageError):
        parse_grid("abc")


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(dt=0)
    with pytest.raises(UsageError):
        RunConfig(alphas=(-1.0,))


def test_usage_errors_exit_2(tmp_path):
    assert main(["dynamics", "--methods", "nope", "--out-dir", str(tmp_path)]) == 2
    assert main(["dynamics", "--delta", "1.5", "--out-dir", str(tmp_path)]) == 2
    with pytest.raises(SystemExit) as info:
        main(["dynamics", "--bogus"])
    assert info.value.code == 2


def test_numerical_failure_exit_1(tmp_path):
    assert main(["dynamics", "--alpha", "0.6", "--methods", "markov", "--tmax", "1",
                 "--out-dir", str(tmp_path)]) == 1
    body = json.loads((tmp_path / "error.json").read_text())
    assert body["schema_version"] == 1 and "Markov" in body["failures"][0]["error"]


def test_dynamics_zero_coupling_entropy(tmp_path):
    assert main(["dynamics", "--alpha", "0", "--tmax", "100", "--dt", "0.5",
                 "--out-dir", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "entropy_a0_d0.1_full.csv")
    assert list(rows[0]) == ["t", "entropy", "s_eq", "method"]
    assert max(float(r["entropy"]) for r in rows) <= 1e-3


def test_full_and_markov_aligned(tmp_path):
    assert main(["dynamics", "--alpha", "0.2", "--methods", "full,markov", "--tmax", "200",
                 "--dt", "0.1", "--out-dir", str(tmp_path)]) == 0
    full = json.loads((tmp_path / "summary_a0.2_d0.1_full.json").read_text())
    mark = json.loads((tmp_path / "summary_a0.2_d0.1_markov.json").read_text())
    assert full["n_local_maxima"] >= 1 and mark["n_local_maxima"] == 0
    a = _rows(tmp_path / "trajectory_a0.2_d0.1_full.csv")
    b = _rows(tmp_path / "trajectory_a0.2_d0.1_markov.csv")
    assert [r["t"] for r in a] == [r["t"] for r in b]


def test_dynamics_is_bit_identical(tmp_path):
    args = ["dynamics", "--alpha", "0.1,0.3", "--tmax", "50", "--dt", "0.5", "--jobs", "2"]
    assert main(args + ["--out-dir", str(tmp_path / "a")]) == 0
    assert main(args + ["--out-dir", str(tmp_path / "b")]) == 0
    for f in sorted((tmp_path / "a").iterdir()):
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_delta_r_time_axis(tmp_path):
    assert main(["dynamics", "--alpha", "0.2", "--methods", "full,volterra",
                 "--time-axis", "delta_r", "--tmax", "2", "--dt", "0.5",
                 "--out-dir", str(tmp_path)]) == 0
    full = _rows(tmp_path / "trajectory_a0.2_d0.1_full.csv")
    vol = _rows(tmp_path / "trajectory_a0.2_d0.1_volterra.csv")
    assert [r["t"] for r in full] == ["0.0", "0.5", "1.0", "1.5", "2.0"]
    for r, s in zip(full, vol):
        assert float(r["sz"]) == pytest.approx(float(s["sz"]), abs=1e-3)


def test_config_file_with_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nalpha = 0.1\ntmax = 5\ndt = 1\nmethods = markov\n")
    assert read_config_file(cfg)["methods"] == "markov"
    assert main(["dynamics", "--config", str(cfg), "--alpha", "0.2",
                 "--out-dir", str(tmp_path)]) == 0
    assert (tmp_path / "trajectory_a0.2_d0.1_markov.csv").exists()
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = red\n")
    assert main(["dynamics", "--config", str(bad)]) == 2


def test_regime_reports_boundaries(tmp_path):
    assert main(["regime", "--delta", "0.1", "--alpha", "0,0.2,0.6",
                 "--out-dir", str(tmp_path)]) == 0
    body = json.loads((tmp_path / "regime_d0.1.json").read_text())
    pts = body["points"]
    assert pts[0]["label"] == "underdamped" and pts[0]["omega0"] == pytest.approx(0.1)
    assert pts[2]["label"] == "incoherent"
    for p in pts:
        assert p["alpha_c"] == pytest.approx(0.5 * (1 + p["delta_r"]))
    assert body["boundaries"]["alpha_c"] == pytest.approx(0.51212, abs=1e-4)


def test_sweep_sorted_and_monotone(tmp_path):
    assert main(["sweep", "--alpha", "0.9,0:0.8:0.1", "--delta", "0.1,0.01", "--jobs", "2",
                 "--out-dir", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "sweep.csv")
    keys = [(float(r["delta"]), float(r["alpha"])) for r in rows]
    assert keys == sorted(keys)
    s = [float(r["s_eq"]) for r in rows if r["delta"] == "0.1"]
    assert s[0] == 0.0 and all(b >= a for a, b in zip(s, s[1:]))
    row = next(r for r in rows if r["delta"] == "0.1" and r["alpha"] == "0.2")
    assert float(row["s_eq"]) == pytest.approx(0.61, abs=0.005)


def test_validate_zero_coupling_passes(tmp_path):
    assert main(["validate", "--alpha", "0", "--out-dir", str(tmp_path)]) == 0
    body = json.loads((tmp_path / "validation_quick.json").read_text())
    assert body["passed"] and {r["suite"] for r in body["suites"]} == {"volterra", "pv", "residue"}
