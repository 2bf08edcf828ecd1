import os
import json
from typing import Any, Dict

WORKING_JSON_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "working.json")

# fallback when working.json is missing or unreadable
DEFAULT_SOLVER_SETTINGS: Dict[str, Any] = {
    "default_tol": 1e-9,
    "hyperbolicity_tol": 1e-6,
    "slope_tol": 1e-6,
    "cluster_tol": 1e-6,
    "residual_tol": 1e-10,
    "newton_max_iter": 100,
    "max_steps": 100000,
    "cauchy_window": 10,
    "contact_slope_tol": 1e-3,
    "match_tol": 1e-3,
}

def load_workingJSON(path: str = WORKING_JSON_PATH) -> Dict[str, Any]:
    # load the entire working.json (or {} if missing/corrupt).
    # safe read; never throws.
    if not os.path.exists(path):
        return {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
            return data if isinstance(data, dict) else {}
    except (json.JSONDecodeError, OSError):
        return {}

def save_workingJSON(path: str, data: Dict[str, Any]) -> Dict[str, Any]:
    try:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        tmp_path = f"{path}.tmp"
        with open(tmp_path, "w", encoding="utf-8") as f:
            json.dump(data, f, ensure_ascii=False, indent=2)
        os.replace(tmp_path, path) # atomic replace
        return {"ok": True, "path": path, "message": "working.json updated atomically."}
    except OSError as e:
        return {"ok": False, "path": path, "message": f"Failed to save working.json: {e}"}

def getSolverSettings(workingJSON: Dict[str, Any]) -> Dict[str, Any]:
    # stored values win; unknown keys are dropped, missing keys fall back to defaults
    stored = workingJSON.get("solver_settings")
    settings = dict(DEFAULT_SOLVER_SETTINGS)
    if isinstance(stored, dict):
        for key, value in stored.items():
            if key in settings and isinstance(value, (int, float)) and not isinstance(value, bool):
                settings[key] = value
    return settings

def updateSolverSetting(workingJSON: Dict[str, Any], key: str, value: float) -> None:
    if key not in DEFAULT_SOLVER_SETTINGS:
        raise KeyError(f"Unknown solver setting '{key}'")
    if "solver_settings" not in workingJSON or not isinstance(workingJSON["solver_settings"], dict):
        workingJSON["solver_settings"] = {}

    workingJSON["solver_settings"][key] = value
    return
