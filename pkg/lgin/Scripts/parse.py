import json
import os
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np

from lgin.Scripts.common import ValidationError
from lgin.Scripts.model import PARAM_NAMES, RAW_PARAM_NAMES, Box, ModelParams, RawParams, normalize

def load_params_file(path: str) -> ModelParams:
    # parameter JSON: either the six normalized keys or the eight raw keys
        # {"b1": 3, "b2": 3, "c1": 1, "c2": 1, "h1": 0.5, "h2": 0.5}
        # {"raw": true, "b1": ..., "c11": ..., "H2": ...}
    if not os.path.exists(path):
        raise ValidationError("params", f"parameter file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (json.JSONDecodeError, OSError) as e:
        raise ValidationError("params", f"cannot read parameter file {path}: {e}") from None
    if not isinstance(data, dict):
        raise ValidationError("params", "parameter file must hold a JSON object")
    return params_from_mapping(data)

def params_from_mapping(data: Mapping[str, Any]) -> ModelParams:
    if data.get("raw") or all(k in data for k in RAW_PARAM_NAMES if k not in PARAM_NAMES):
        return normalize(RawParams.from_dict(data))
    return ModelParams.from_dict(data)

def params_from_flags(values: Dict[str, Optional[float]], raw: bool = False) -> ModelParams:
    # values are the CLI flags; unset flags are None
    names = RAW_PARAM_NAMES if raw else PARAM_NAMES
    missing = [f"--{k}" for k in names if values.get(k) is None]
    if missing:
        raise ValidationError(missing[0].lstrip("-"), f"missing parameter flag(s): {', '.join(missing)}")
    data = {k: values[k] for k in names}
    return normalize(RawParams.from_dict(data)) if raw else ModelParams.from_dict(data)

def resolve_params(params_file: Optional[str], values: Dict[str, Optional[float]], raw: bool = False) -> ModelParams:
    # a parameter file wins over flags
    if params_file:
        return load_params_file(params_file)
    return params_from_flags(values, raw=raw)

def parse_grid_spec(spec: str) -> Tuple[str, List[float]]:
    # NAME=v1,v2,v3  or  NAME=lo:hi:n (n evenly spaced values)
    if "=" not in spec:
        raise ValidationError("grid", f"grid spec '{spec}' must look like NAME=v1,v2 or NAME=lo:hi:n")
    name, values = spec.split("=", 1)
    name = name.strip()
    if name not in PARAM_NAMES:
        raise ValidationError("grid", f"unknown parameter '{name}' in grid spec")
    try:
        if ":" in values:
            lo, hi, n = values.split(":")
            vals = [float(v) for v in np.linspace(float(lo), float(hi), int(n))]
        else:
            vals = [float(v) for v in values.split(",") if v.strip()]
    except ValueError:
        raise ValidationError("grid", f"cannot parse grid values '{values}'") from None
    if not vals:
        raise ValidationError("grid", f"grid spec '{spec}' has no values")
    return name, vals

def parse_bounds(text: str) -> Box:
    # "x_lo,x_hi,y_lo,y_hi"
    try:
        parts = [float(v) for v in text.split(",")]
    except ValueError:
        raise ValidationError("bounds", f"cannot parse bounds '{text}'") from None
    if len(parts) != 4:
        raise ValidationError("bounds", "bounds need four numbers: x_lo,x_hi,y_lo,y_hi")
    return Box(*parts)
