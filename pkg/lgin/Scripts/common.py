import os
import math
import logging
from dataclasses import dataclass, fields
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional

from working import cache

logger = logging.getLogger(__name__)

TOL_ENV_VAR = "LGIN_DEFAULT_TOL"

def getRootFolder() -> str:
    root_folder = str(Path(__file__).resolve().parent.parent.parent)
    return root_folder

def getWorkingFolder() -> str:
    working_folder = os.path.join(getRootFolder(), "working")
    return working_folder

def getReportPath() -> str:
    report_path = os.path.join(getRootFolder(), "analytical_output", "report.json")
    return report_path


# =============================================================================
# ERRORS
# =============================================================================

class LGINError(Exception):
    """Base class for every error raised by the library."""


class ValidationError(LGINError, ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(message)
        self.field = field


class DomainError(LGINError, ValueError):
    pass


class PoleError(LGINError, ZeroDivisionError):
    pass


class NoRealBranchError(LGINError, ValueError):
    pass


class DegenerateSlopeError(LGINError, ZeroDivisionError):
    pass


class HypothesisError(LGINError):
    def __init__(self, inequality: str, message: str):
        super().__init__(message)
        self.inequality = inequality


class SolverError(LGINError):
    def __init__(self, message: str, seed: Any = None):
        super().__init__(message)
        self.seed = seed


class ContactOrderError(LGINError):
    def __init__(self, message: str, cluster_order: int, slope_order: int):
        super().__init__(message)
        self.cluster_order = cluster_order
        self.slope_order = slope_order


class RegimeError(LGINError):
    pass


class BracketError(LGINError):
    pass


# =============================================================================
# SETTINGS
# =============================================================================

@dataclass(frozen=True)
class SolverSettings:
    default_tol: float = 1e-9
    hyperbolicity_tol: float = 1e-6
    slope_tol: float = 1e-6
    cluster_tol: float = 1e-6
    residual_tol: float = 1e-10
    newton_max_iter: int = 100
    max_steps: int = 100000
    cauchy_window: int = 10
    contact_slope_tol: float = 1e-3
    match_tol: float = 1e-3


def _env_tol() -> Optional[float]:
    raw = os.environ.get(TOL_ENV_VAR)
    if raw is None or raw.strip() == "":
        return None
    try:
        value = float(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r: not a number", TOL_ENV_VAR, raw)
        return None
    if not math.isfinite(value) or value <= 0:
        logger.warning("Ignoring %s=%r: must be a positive finite number", TOL_ENV_VAR, raw)
        return None
    return value


@lru_cache(maxsize=1)
def _stored_settings() -> Dict[str, Any]:
    return cache.getSolverSettings(cache.load_workingJSON())


def get_settings() -> SolverSettings:
    # working.json values, with LGIN_DEFAULT_TOL overriding default_tol
    stored = _stored_settings()
    kwargs = {}
    for f in fields(SolverSettings):
        if f.name in stored:
            kwargs[f.name] = int(stored[f.name]) if f.type is int else float(stored[f.name])
    env_tol = _env_tol()
    if env_tol is not None:
        kwargs["default_tol"] = env_tol
    return SolverSettings(**kwargs)


# =============================================================================
# SMALL HELPERS
# =============================================================================

def require_positive(name: str, value: Any) -> float:
    # shared field validation: finite and strictly positive
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ValidationError(name, f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(v):
        raise ValidationError(name, f"{name} must be finite")
    if v <= 0:
        raise ValidationError(name, f"{name} must be > 0")
    return v


def require_finite(name: str, value: Any) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ValidationError(name, f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(v):
        raise ValidationError(name, f"{name} must be finite")
    return v


def se_leq(x1: float, y1: float, x2: float, y2: float) -> bool:
    # south-east order: (x1, y1) <=se (x2, y2) iff x1 <= x2 and y1 >= y2
    return x1 <= x2 and y1 >= y2
