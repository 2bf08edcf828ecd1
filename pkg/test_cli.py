import io
import json

import pandas as pd
import pytest

from conftest import P1_EQ
from lgin.Scripts.heavy_analysis.parameter_scan import SCAN_COLUMNS
from lgin.Scripts.summary_utils import load_report
from main import run
from working.working_utils import load_csv

P1_FLAGS = ["--b1", "3", "--b2", "3", "--c1", "1", "--c2", "1", "--h1", "0.5", "--h2", "0.5"]
P3_FLAGS = ["--b1", "6", "--b2", "6", "--c1", "3", "--c2", "3", "--h1", "0.01", "--h2", "0.01"]


def _csv(text: str) -> pd.DataFrame:
    return pd.read_csv(io.StringIO(text), comment="#", float_precision="round_trip")


def _comments(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        if line.startswith("# ") and "=" in line:
            key, value = line[2:].split("=", 1)
            out[key] = value
    return out


# =============================================================================
# analyze
# =============================================================================

def test_analyze_p1(capsys):
    code = run(["analyze", *P1_FLAGS, "--quiet"])
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["equilibria"]["count"] == 1
    assert report["equilibria"]["labels"] == ["LAS"]
    assert report["equilibria"]["nonneg"][0]["x"] == pytest.approx(P1_EQ, abs=1e-10)
    assert report["uniqueness"] == {"condA": False, "condB": True, "guaranteed": True}
    assert report["gas_certified"] is True
    assert report["all_passed"] is True
    assert len(report["theorem_checks"]) == 9


def test_analyze_bistable(capsys):
    code = run(["analyze", *P3_FLAGS, "--quiet", "--no-gas"])
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["equilibria"]["count"] == 3
    assert report["equilibria"]["labels"] == ["LAS", "Saddle", "LAS"]
    assert report["equilibria"]["prediction"]["kind"] == "Bistable"
    assert report["gas_certified"] is None


def test_analyze_large_immigration(capsys):
    flags = ["--b1", "0.06617", "--b2", "0.51579", "--c1", "33.924", "--c2", "29.002",
             "--h1", "54.974", "--h2", "0.07949"]
    code = run(["analyze", *flags, "--quiet"])
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["equilibria"]["count"] == 1
    assert report["gas_certified"] is True


def test_analyze_slow_contraction(capsys):
    flags = ["--b1", "0.74935", "--b2", "38.567", "--c1", "0.34521", "--c2", "9.9922",
             "--h1", "3.6224", "--h2", "0.21135"]
    code = run(["analyze", *flags, "--quiet"])
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["gas_certified"] is True
    assert report["all_passed"] is True


def test_analyze_rejects_nonpositive(capsys):
    flags = list(P1_FLAGS)
    flags[1] = "0"
    code = run(["analyze", *flags])
    captured = capsys.readouterr()
    assert code == 1
    assert captured.out == ""
    assert "b1 must be > 0" in captured.err


def test_analyze_missing_flag(capsys):
    assert run(["analyze", "--b1", "3"]) == 1
    assert "missing parameter" in capsys.readouterr().err


def test_analyze_raw_params_file(tmp_path, capsys):
    path = tmp_path / "raw.json"
    path.write_text(json.dumps({"b1": 5, "b2": 5, "c11": 1, "c12": 1, "c21": 1, "c22": 1, "H1": 2, "H2": 3}))
    code = run(["analyze", "--params", str(path), "--quiet"])
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["params"] == {"b1": 5, "b2": 5, "c1": 1, "c2": 1, "h1": 2, "h2": 3}


def test_analyze_report_file_round_trip(tmp_path, capsys):
    path = tmp_path / "out" / "report.json"
    assert run(["analyze", *P3_FLAGS, "--quiet", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    report = load_report(str(path))
    assert report is not None
    assert report.equilibria.count == 3
    assert report.equilibria.labels == ["LAS", "Saddle", "LAS"]
    assert report.params.c1 == 3
    assert report.all_passed
    assert report.gas_certified is False


def test_load_report_missing(tmp_path):
    assert load_report(str(tmp_path / "nope.json")) is None


# =============================================================================
# simulate
# =============================================================================

def test_simulate_converges(capsys):
    assert run(["simulate", *P1_FLAGS, "--x0", "0", "--y0", "0"]) == 0
    out = capsys.readouterr().out
    df = _csv(out)
    assert list(df.columns) == ["n", "x", "y"]
    assert df.iloc[0].tolist() == [0, 0.0, 0.0]
    assert df["x"].iloc[-1] == pytest.approx(P1_EQ, abs=1e-8)
    meta = _comments(out)
    lx, ly = (float(v) for v in meta["limit"].split(","))
    assert (lx, ly) == pytest.approx((P1_EQ, P1_EQ), abs=1e-8)
    assert float(meta["cauchy_tail"]) <= 1e-9
    assert int(meta["monotone_onset"]) >= 0


def test_simulate_from_equilibrium(capsys):
    assert run(["simulate", *P1_FLAGS, "--x0", repr(P1_EQ), "--y0", repr(P1_EQ)]) == 0
    df = _csv(capsys.readouterr().out)
    assert len(df) == 11


def test_simulate_budget(capsys):
    assert run(["simulate", *P1_FLAGS, "--steps", "5"]) == 0
    out = capsys.readouterr().out
    assert len(_csv(out)) == 6
    assert "limit" not in _comments(out)


def test_simulate_outside_quadrant(capsys):
    assert run(["simulate", *P1_FLAGS, "--x0", "-1", "--y0", "0"]) == 1
    assert capsys.readouterr().out == ""


def test_simulate_bad_steps():
    assert run(["simulate", *P1_FLAGS, "--steps", "0"]) == 1


# =============================================================================
# basin
# =============================================================================

def test_basin_unique(capsys):
    assert run(["basin", *P1_FLAGS, "--bounds", "0,5,0,5", "--nx", "10", "--ny", "10"]) == 0
    df = _csv(capsys.readouterr().out)
    assert list(df.columns) == ["x", "y", "label"]
    assert len(df) == 100
    assert set(df["label"]) == {1}


def test_basin_separatrix_outside_bistable(tmp_path, capsys):
    code = run(["basin", *P1_FLAGS, "--nx", "3", "--ny", "3", "--separatrix",
                "--separatrix-out", str(tmp_path / "sep.csv")])
    assert code == 1
    assert "Bistable" in capsys.readouterr().err
    assert not (tmp_path / "sep.csv").exists()


def test_basin_bad_bounds():
    assert run(["basin", *P1_FLAGS, "--bounds", "0,5,0"]) == 1
    assert run(["basin", *P1_FLAGS, "--bounds", "-1,5,0,5"]) == 1


def test_basin_bistable_with_separatrix(tmp_path, capsys):
    grid_path = tmp_path / "basin.csv"
    sep_path = tmp_path / "sep.csv"
    code = run(["basin", *P3_FLAGS, "--bounds", "0,6,0.05,6.05", "--nx", "6", "--ny", "6",
                "--out", str(grid_path), "--separatrix", "--separatrix-out", str(sep_path),
                "--separatrix-nx", "11"])
    assert code == 0
    grid = load_csv(str(grid_path))
    assert set(grid["label"]) == {1, 3}
    sep = load_csv(str(sep_path))
    assert list(sep.columns) == ["x", "ystar"]
    assert sep["ystar"].is_monotonic_increasing and sep["ystar"].is_unique
    assert len(sep) >= 11


# =============================================================================
# scan
# =============================================================================

def test_scan_deterministic(capsys):
    first = run(["scan", "--draws", "3", "--seed", "7"])
    out1 = capsys.readouterr().out
    second = run(["scan", "--draws", "3", "--seed", "7", "--jobs", "2"])
    out2 = capsys.readouterr().out
    assert first == second
    assert out1 == out2
    assert out1.splitlines()[0] == ",".join(SCAN_COLUMNS)
    assert len(_csv(out1)) == 3


def test_scan_seed_changes_draws(capsys):
    run(["scan", "--draws", "2", "--seed", "1"])
    a = _csv(capsys.readouterr().out)
    run(["scan", "--draws", "2", "--seed", "2"])
    b = _csv(capsys.readouterr().out)
    assert not a[["b1", "c1"]].equals(b[["b1", "c1"]])


def test_scan_grid(capsys):
    code = run(["scan", "--grid", "c1=0.5,1.0", "--grid", "h1=0.5:1.0:3", *P1_FLAGS])
    df = _csv(capsys.readouterr().out)
    assert code == 0
    assert len(df) == 6
    assert set(df["count"]) == {1}
    assert sorted(set(df["c1"])) == [0.5, 1.0]
    assert sorted(set(df["h1"])) == [0.5, 0.75, 1.0]


def test_scan_needs_exactly_one_source():
    assert run(["scan"]) == 1
    assert run(["scan", "--draws", "2", "--grid", "c1=1,2"]) == 1
    assert run(["scan", "--draws", "2", "--jobs", "0"]) == 1


def test_unknown_command():
    assert run(["frobnicate"]) == 1
