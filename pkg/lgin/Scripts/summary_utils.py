# imports
from lgin.Scripts.common import getReportPath
from lgin.Scripts.curves import SlopePair
from lgin.Scripts.equilibria import (
    BehaviorKind,
    Classification,
    EigenPair,
    Equilibrium,
    EquilibriumSet,
    GlobalBehavior,
    Region,
    Stability,
    UniquenessReport,
)
from lgin.Scripts.model import Jacobian2, ModelParams, Point
from lgin.Scripts.validation_utils import AnalysisReport, CheckResult

#
import json
import os
import time
from datetime import datetime
from typing import Any, Dict, Optional

report_path = getReportPath()


def _ensure_output_dir(path: str) -> None:
    parent = os.path.dirname(path)
    if parent and not os.path.exists(parent):
        os.makedirs(parent, exist_ok=True)

def _atomic_write_json(path: str, data: Dict[str, Any]) -> None:
    # Write JSON to temp file first, then replaces
    temp_path = f"{path}.tmp"
    with open(temp_path, "w", encoding="utf-8") as f:
        json.dump(data, f, ensure_ascii=False, indent=2)
    os.replace(temp_path, path)


# =============================================================================
# TO DICT
# =============================================================================

def equilibrium_to_dict(e: Equilibrium) -> Dict[str, Any]:
    return {
        "x": e.point.x,
        "y": e.point.y,
        "region": e.region.value,
        "contact_order": e.contact_order,
        "residual": e.residual,
        "jacobian": {"a": e.jac.a, "b": e.jac.b, "c": e.jac.c, "d": e.jac.d},
        "eigenvalues": None if e.eig is None else {"lambda1": e.eig.lambda1, "lambda2": e.eig.lambda2},
        "slopes": None if e.slopes is None else {"s1": e.slopes.s1, "s2": e.slopes.s2},
        "classification": None if e.classification is None else {
            "label": e.classification.label.value,
            "margin": e.classification.margin,
        },
    }

def report_to_dict(report: AnalysisReport) -> Dict[str, Any]:
    eqs = report.equilibria
    return {
        "params": report.params.to_dict(),
        "equilibria": {
            "count": eqs.count,
            "labels": eqs.labels,
            "nonneg": [equilibrium_to_dict(e) for e in eqs.nonneg],
            "all": [equilibrium_to_dict(e) for e in eqs.all],
            "prediction": {"kind": eqs.prediction.kind.value, "details": eqs.prediction.details},
        },
        "uniqueness": {
            "condA": report.uniqueness.condA,
            "condB": report.uniqueness.condB,
            "guaranteed": report.uniqueness.guaranteed,
        },
        "gas_certified": report.gas_certified,
        "theorem_checks": [
            {"name": c.name, "passed": c.passed, "detail": c.detail} for c in report.theorem_checks
        ],
        "all_passed": report.all_passed,
    }


# =============================================================================
# FROM DICT
# =============================================================================

def equilibrium_from_dict(data: Dict[str, Any]) -> Equilibrium:
    eig = data.get("eigenvalues")
    slopes = data.get("slopes")
    cls = data.get("classification")
    return Equilibrium(
        point=Point(data["x"], data["y"]),
        jac=Jacobian2(**data["jacobian"]),
        contact_order=int(data["contact_order"]),
        region=Region(data["region"]),
        residual=float(data["residual"]),
        eig=None if eig is None else EigenPair(eig["lambda1"], eig["lambda2"]),
        slopes=None if slopes is None else SlopePair(slopes["s1"], slopes["s2"]),
        classification=None if cls is None else Classification(Stability(cls["label"]), cls["margin"]),
    )

def report_from_dict(data: Dict[str, Any]) -> AnalysisReport:
    eq_data = data["equilibria"]
    prediction = eq_data["prediction"]
    equilibria = EquilibriumSet(
        all=tuple(equilibrium_from_dict(e) for e in eq_data["all"]),
        nonneg=tuple(equilibrium_from_dict(e) for e in eq_data["nonneg"]),
        prediction=GlobalBehavior(BehaviorKind(prediction["kind"]), dict(prediction["details"])),
    )
    return AnalysisReport(
        params=ModelParams.from_dict(data["params"]),
        equilibria=equilibria,
        uniqueness=UniquenessReport(**data["uniqueness"]),
        gas_certified=data.get("gas_certified"),
        theorem_checks=tuple(CheckResult(**c) for c in data["theorem_checks"]),
    )


# =============================================================================
# FILES
# =============================================================================

def report_to_json(report: AnalysisReport) -> str:
    return json.dumps(report_to_dict(report), ensure_ascii=False, indent=2)

def save_report(report: AnalysisReport, path: Optional[str] = None) -> Dict[str, Any]:
    # Saves a report as a standalone JSON document (default analytical_output/report.json)
        # Returns:
            # A result dict: {"ok": bool, "path": str, "message": str}
    path = path or report_path
    result = {"ok": False, "path": path, "message": ""}

    payload = report_to_dict(report)
    payload["_meta"] = {
        "last_updated": datetime.now().isoformat(timespec="seconds"),
        "unix_ts": int(time.time()),
    }

    try:
        _ensure_output_dir(path)
        _atomic_write_json(path, payload)
    except OSError as e:
        result["message"] = f"Failed to write report: {e}"
        return result

    result["ok"] = True
    result["message"] = f"Saved report to '{path}'."
    return result

def load_report(path: Optional[str] = None) -> Optional[AnalysisReport]:
    # load a saved report (None if missing/corrupt); safe read, never throws
    path = path or report_path
    if not os.path.exists(path):
        return None
    try:
        with open(path, "r", encoding="utf-8") as f:
            return report_from_dict(json.load(f))
    except (json.JSONDecodeError, OSError, KeyError, TypeError, ValueError):
        return None
