import pandas as pd
import pytest

from lgin.Scripts.common import get_settings
from working.cache import (
    DEFAULT_SOLVER_SETTINGS,
    getSolverSettings,
    load_workingJSON,
    save_workingJSON,
    updateSolverSetting,
)
from working.working_utils import frame_to_csv, load_csv, save_csv


def test_working_json_round_trip(tmp_path):
    path = str(tmp_path / "working.json")
    assert load_workingJSON(path) == {}
    data = {}
    updateSolverSetting(data, "default_tol", 1e-12)
    assert save_workingJSON(path, data)["ok"]
    loaded = load_workingJSON(path)
    assert getSolverSettings(loaded)["default_tol"] == 1e-12
    assert getSolverSettings(loaded)["max_steps"] == DEFAULT_SOLVER_SETTINGS["max_steps"]


def test_corrupt_working_json(tmp_path):
    path = tmp_path / "working.json"
    path.write_text("{oops")
    assert load_workingJSON(str(path)) == {}


def test_solver_settings_filtering():
    stored = {"solver_settings": {"default_tol": 1e-7, "bogus": 1.0, "max_steps": "many", "match_tol": True}}
    settings = getSolverSettings(stored)
    assert settings["default_tol"] == 1e-7
    assert "bogus" not in settings
    assert settings["max_steps"] == DEFAULT_SOLVER_SETTINGS["max_steps"]
    assert settings["match_tol"] == DEFAULT_SOLVER_SETTINGS["match_tol"]
    with pytest.raises(KeyError):
        updateSolverSetting({}, "bogus", 1.0)


def test_default_tol_env_override(monkeypatch):
    base = get_settings().default_tol
    monkeypatch.setenv("LGIN_DEFAULT_TOL", "1e-6")
    assert get_settings().default_tol == 1e-6
    for junk in ("abc", "-1", "inf", ""):
        monkeypatch.setenv("LGIN_DEFAULT_TOL", junk)
        assert get_settings().default_tol == base


def test_csv_round_trip(tmp_path):
    df = pd.DataFrame({"x": [0.1, 1.0 / 3.0], "ystar": [2.0, 1e-17]})
    path = str(tmp_path / "sub" / "out.csv")
    res = save_csv(df, path, comments=["bracket_width=1e-9"])
    assert res["ok"] and res["rows"] == 2
    back = load_csv(path)
    assert back["x"].tolist() == df["x"].tolist()
    assert back["ystar"].tolist() == df["ystar"].tolist()
    assert load_csv(str(tmp_path / "missing.csv")) is None


def test_frame_to_csv_format():
    text = frame_to_csv(pd.DataFrame({"n": [0, 1], "x": [0.5, 0.25]}), comments=["limit=1,2"])
    assert text == "n,x\n0,0.5\n1,0.25\n# limit=1,2\n"
