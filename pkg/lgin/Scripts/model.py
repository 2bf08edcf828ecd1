"""
Parameters and pointwise evaluation of the Leslie-Gower map with immigration.

    x' = b1 x / (1 + x + c1 y) + h1
    y' = b2 y / (1 + y + c2 x) + h2

Every type here is frozen and every function is pure.
"""

import math
from dataclasses import dataclass, asdict
from typing import Any, Dict, Mapping, Tuple

from lgin.Scripts.common import DomainError, ValidationError, require_finite, require_positive, se_leq

PARAM_NAMES = ("b1", "b2", "c1", "c2", "h1", "h2")
RAW_PARAM_NAMES = ("b1", "b2", "c11", "c12", "c21", "c22", "H1", "H2")


# =============================================================================
# TYPES
# =============================================================================

@dataclass(frozen=True)
class RawParams:
    b1: float
    b2: float
    c11: float
    c12: float
    c21: float
    c22: float
    H1: float
    H2: float

    def __post_init__(self):
        for name in RAW_PARAM_NAMES:
            object.__setattr__(self, name, require_positive(name, getattr(self, name)))

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RawParams":
        missing = [k for k in RAW_PARAM_NAMES if k not in data]
        if missing:
            raise ValidationError(missing[0], f"missing raw parameter(s): {', '.join(missing)}")
        return cls(**{k: data[k] for k in RAW_PARAM_NAMES})

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class ModelParams:
    b1: float
    b2: float
    c1: float
    c2: float
    h1: float
    h2: float

    def __post_init__(self):
        for name in PARAM_NAMES:
            object.__setattr__(self, name, require_positive(name, getattr(self, name)))

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ModelParams":
        missing = [k for k in PARAM_NAMES if k not in data]
        if missing:
            raise ValidationError(missing[0], f"missing parameter(s): {', '.join(missing)}")
        return cls(**{k: data[k] for k in PARAM_NAMES})

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)

    def replace(self, **changes: float) -> "ModelParams":
        data = self.to_dict()
        data.update(changes)
        return ModelParams(**data)

    def swapped(self) -> "ModelParams":
        # the same system with the roles of the two species exchanged
        return ModelParams(self.b2, self.b1, self.c2, self.c1, self.h2, self.h1)


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", require_finite("x", self.x))
        object.__setattr__(self, "y", require_finite("y", self.y))

    def as_tuple(self) -> Tuple[float, float]:
        return (self.x, self.y)

    def se_leq(self, other: "Point") -> bool:
        return se_leq(self.x, self.y, other.x, other.y)

    def dist_inf(self, other: "Point") -> float:
        return max(abs(self.x - other.x), abs(self.y - other.y))


@dataclass(frozen=True)
class Jacobian2:
    # row-major: a = df/dx, b = df/dy, c = dg/dx, d = dg/dy
    a: float
    b: float
    c: float
    d: float

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> float:
        return self.a + self.d


@dataclass(frozen=True)
class Box:
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def __post_init__(self):
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi):
            raise ValidationError("box", f"empty box [{self.x_lo}, {self.x_hi}]x[{self.y_lo}, {self.y_hi}]")

    def contains(self, pt: Point, slack: float = 0.0) -> bool:
        return (self.x_lo - slack <= pt.x <= self.x_hi + slack
                and self.y_lo - slack <= pt.y <= self.y_hi + slack)

    @property
    def se_min(self) -> Point:
        return Point(self.x_lo, self.y_hi)

    @property
    def se_max(self) -> Point:
        return Point(self.x_hi, self.y_lo)


# =============================================================================
# OPERATIONS
# =============================================================================

def normalize(raw: RawParams) -> ModelParams:
    # (x, y) -> (c11 x, c22 y) conjugates the raw system onto the normalized one.
    # h2 is c22*H2; the substitution does not support c22*H1.
    return ModelParams(
        b1=raw.b1,
        b2=raw.b2,
        c1=raw.c12 / raw.c22,
        c2=raw.c21 / raw.c11,
        h1=raw.c11 * raw.H1,
        h2=raw.c22 * raw.H2,
    )


def scale_point(raw: RawParams, pt: Point) -> Point:
    return Point(raw.c11 * pt.x, raw.c22 * pt.y)


def _check_domain(pt: Point) -> None:
    if pt.x < 0 or pt.y < 0:
        raise DomainError(f"point ({pt.x}, {pt.y}) is outside [0, inf)^2")


def map_values(p: ModelParams, x: float, y: float) -> Tuple[float, float]:
    # unchecked evaluation, also used off the quadrant by the equilibrium solver
    fx = p.b1 * x / (1.0 + x + p.c1 * y) + p.h1
    gy = p.b2 * y / (1.0 + y + p.c2 * x) + p.h2
    return fx, gy


def jacobian_values(p: ModelParams, x: float, y: float) -> Jacobian2:
    d1 = 1.0 + x + p.c1 * y
    d2 = 1.0 + y + p.c2 * x
    return Jacobian2(
        a=p.b1 * (1.0 + p.c1 * y) / (d1 * d1),
        b=-p.b1 * p.c1 * x / (d1 * d1),
        c=-p.b2 * p.c2 * y / (d2 * d2),
        d=p.b2 * (1.0 + p.c2 * x) / (d2 * d2),
    )


def step(p: ModelParams, pt: Point) -> Point:
    _check_domain(pt)
    return Point(*map_values(p, pt.x, pt.y))


def raw_step(raw: RawParams, pt: Point) -> Point:
    _check_domain(pt)
    x, y = pt.x, pt.y
    return Point(
        raw.b1 * x / (1.0 + raw.c11 * x + raw.c12 * y) + raw.H1,
        raw.b2 * y / (1.0 + raw.c21 * x + raw.c22 * y) + raw.H2,
    )


def jacobian(p: ModelParams, pt: Point) -> Jacobian2:
    _check_domain(pt)
    return jacobian_values(p, pt.x, pt.y)


def determinant(p: ModelParams, pt: Point) -> float:
    # closed form of det J; positive on the whole quadrant
    _check_domain(pt)
    x, y = pt.x, pt.y
    return (p.b1 * p.b2 * (p.c2 * x + p.c1 * y + 1.0)
            / ((p.c2 * x + y + 1.0) ** 2 * (x + p.c1 * y + 1.0) ** 2))


def trapping_box(p: ModelParams) -> Box:
    return Box(p.h1, p.h1 + p.b1, p.h2, p.h2 + p.b2)


def fixed_point_residual(p: ModelParams, x: float, y: float) -> float:
    try:
        fx, gy = map_values(p, x, y)
    except ZeroDivisionError:
        return math.inf
    r = max(abs(fx - x), abs(gy - y))
    return r if math.isfinite(r) else math.inf
