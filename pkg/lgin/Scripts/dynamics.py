"""
Orbits of the map and what they say about the global picture.

Single orbits (iterate) run point by point; grids and separatrix brackets
run through a vectorized iteration that advances every unfinished start
at once and freezes each one when its Cauchy window is satisfied.
"""

import math
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from lgin.Scripts.common import BracketError, DomainError, RegimeError, ValidationError, get_settings
from lgin.Scripts.curves import closest_root_pair, shifted_quartic
from lgin.Scripts.equilibria import BehaviorKind, EquilibriumSet, count_nonneg, find_equilibria
from lgin.Scripts.model import PARAM_NAMES, Box, Jacobian2, ModelParams, Point, step, trapping_box

logger = logging.getLogger(__name__)

UNRESOLVED = 0
# relative distance of the merging pair accepted as a fold
FOLD_SEPARATION = 1e-8


# =============================================================================
# TYPES
# =============================================================================

@dataclass(frozen=True)
class Trajectory:
    points: Tuple[Point, ...]
    limit: Optional[Point]
    cauchy_tail: float
    monotone_onset: Optional[int]

    @property
    def converged(self) -> bool:
        return self.limit is not None


@dataclass(frozen=True)
class Envelope:
    lower_seq: Tuple[Point, ...]
    upper_seq: Tuple[Point, ...]

    def gaps(self) -> List[float]:
        return [lo.dist_inf(hi) for lo, hi in zip(self.lower_seq, self.upper_seq)]


@dataclass(frozen=True, eq=False)
class BasinGrid:
    """
    labels[j, i] is the 1-based index (into EquilibriumSet.nonneg) of the
    equilibrium that the orbit of (xs[i], ys[j]) converges to, or
    UNRESOLVED.
    """
    bounds: Box
    resolution: Tuple[int, int]
    labels: np.ndarray
    xs: np.ndarray
    ys: np.ndarray

    def label_at(self, i: int, j: int) -> int:
        return int(self.labels[j, i])

    def present_labels(self) -> List[int]:
        return sorted(int(v) for v in np.unique(self.labels))


@dataclass(frozen=True)
class Separatrix:
    samples: Tuple[Tuple[float, float], ...]
    bracket_width: float
    absent: Tuple[Tuple[float, str], ...] = ()
    saddle_error: float = math.nan
    local_slope: float = math.nan
    eigen_slope: float = math.nan

    @property
    def xs(self) -> List[float]:
        return [s[0] for s in self.samples]

    @property
    def ystars(self) -> List[float]:
        return [s[1] for s in self.samples]


# =============================================================================
# SINGLE ORBITS
# =============================================================================

def _monotone_onset(points: Sequence[Point], tol: float) -> int:
    # first index from which no coordinate changes direction; |steps| <= tol carry no sign
    onset = 0
    for coord in ("x", "y"):
        values = [getattr(pt, coord) for pt in points]
        last_sign = 0
        for n in range(len(values) - 2, -1, -1):
            delta = values[n + 1] - values[n]
            if abs(delta) <= tol:
                continue
            sign = 1 if delta > 0 else -1
            if last_sign and sign != last_sign:
                onset = max(onset, n + 1)
                break
            last_sign = sign
    return onset


def iterate(
    p: ModelParams,
    start: Point,
    max_n: Optional[int] = None,
    tol: Optional[float] = None,
    window: Optional[int] = None,
) -> Trajectory:
    """
    Iterate the map from start.

    The orbit stops once `window` consecutive steps have sup-norm size at
    most tol; the last point is then reported as the limit. Hitting max_n
    first is not an error: the trajectory comes back without a limit.
    """
    settings = get_settings()
    max_n = settings.max_steps if max_n is None else max_n
    tol = settings.default_tol if tol is None else tol
    window = settings.cauchy_window if window is None else window
    if max_n < 1:
        raise ValidationError("max_n", "max_n must be >= 1")
    if not tol > 0:
        raise ValidationError("tol", "tol must be > 0")

    points = [start]
    diffs: List[float] = []
    small = 0
    current = start
    for _ in range(max_n):
        nxt = step(p, current)
        diff = current.dist_inf(nxt)
        points.append(nxt)
        diffs.append(diff)
        current = nxt
        small = small + 1 if diff <= tol else 0
        if small >= window:
            break

    tail = max(diffs[-window:])
    if small >= window:
        return Trajectory(tuple(points), current, tail, _monotone_onset(points, tol))
    logger.debug("orbit from (%g, %g) unconverged after %d steps, tail %.3e", start.x, start.y, max_n, tail)
    return Trajectory(tuple(points), None, tail, None)


def envelope(p: ModelParams, n: int) -> Envelope:
    if n < 1:
        raise ValidationError("n", "n must be >= 1")
    box = trapping_box(p)
    lower, upper = [box.se_min], [box.se_max]
    for _ in range(n - 1):
        lower.append(step(p, lower[-1]))
        upper.append(step(p, upper[-1]))
    return Envelope(tuple(lower), tuple(upper))


def gas_certificate(p: ModelParams, tol: Optional[float] = None, max_n: Optional[int] = None) -> bool:
    """
    True when the two corner orbits of the trapping box meet within tol
    before max_n steps.

    Every orbit is squeezed between them in the south-east order from the
    first step on, so a vanishing gap pins every orbit to one point. Only
    the gap decides; small per-step motion of the corners is no stop signal.
    """
    settings = get_settings()
    tol = settings.default_tol if tol is None else tol
    max_n = settings.max_steps if max_n is None else max_n
    box = trapping_box(p)
    lower, upper = box.se_min, box.se_max
    for _ in range(max_n):
        if lower.dist_inf(upper) <= tol:
            return True
        lower, upper = step(p, lower), step(p, upper)
    gap = lower.dist_inf(upper)
    if gap > tol:
        logger.debug("corner orbits still %.3e apart after %d steps", gap, max_n)
    return gap <= tol


def stable_direction_slope(jac: Jacobian2) -> float:
    # slope dy/dx of the eigenvector of the eigenvalue with smaller modulus
    root = math.sqrt((jac.a - jac.d) ** 2 + 4.0 * jac.b * jac.c)
    lam1 = 0.5 * (jac.trace + root)
    lam2 = jac.det / lam1
    if jac.b != 0.0:
        return (lam2 - jac.a) / jac.b
    return jac.c / (lam2 - jac.d)


# =============================================================================
# MANY ORBITS AT ONCE
# =============================================================================

def converge_many(
    p: ModelParams,
    xs: np.ndarray,
    ys: np.ndarray,
    tol: float,
    max_n: int,
    window: int,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = np.array(xs, dtype=float)
    y = np.array(ys, dtype=float)
    small = np.zeros(x.shape, dtype=int)
    done = np.zeros(x.shape, dtype=bool)
    for _ in range(max_n):
        active = ~done
        if not active.any():
            break
        xa, ya = x[active], y[active]
        xn = p.b1 * xa / (1.0 + xa + p.c1 * ya) + p.h1
        yn = p.b2 * ya / (1.0 + ya + p.c2 * xa) + p.h2
        diff = np.maximum(np.abs(xn - xa), np.abs(yn - ya))
        x[active], y[active] = xn, yn
        counts = np.where(diff <= tol, small[active] + 1, 0)
        small[active] = counts
        done[active] = counts >= window
    return x, y, done


def match_limits(
    x: np.ndarray, y: np.ndarray, done: np.ndarray, targets: Sequence[Point], match_tol: float,
) -> np.ndarray:
    # 1-based index of the nearest target within match_tol, UNRESOLVED otherwise
    labels = np.full(x.shape, UNRESOLVED, dtype=int)
    if not targets:
        return labels
    dist = np.stack([np.maximum(np.abs(x - t.x), np.abs(y - t.y)) for t in targets])
    nearest = np.argmin(dist, axis=0)
    ok = done & (np.min(dist, axis=0) <= match_tol)
    labels[ok] = nearest[ok] + 1
    return labels


def basin_grid(
    p: ModelParams,
    bounds: Box,
    nx: int,
    ny: int,
    eqs: Optional[EquilibriumSet] = None,
    tol: Optional[float] = None,
    max_n: Optional[int] = None,
    match_tol: Optional[float] = None,
) -> BasinGrid:
    if nx < 2 or ny < 2:
        raise ValidationError("resolution", "resolution must be at least 2x2")
    if bounds.x_lo < 0 or bounds.y_lo < 0:
        raise DomainError(f"grid bounds {bounds} leave [0, inf)^2")
    settings = get_settings()
    tol = settings.default_tol if tol is None else tol
    max_n = settings.max_steps if max_n is None else max_n
    match_tol = settings.match_tol if match_tol is None else match_tol
    eqs = find_equilibria(p) if eqs is None else eqs

    xs = np.linspace(bounds.x_lo, bounds.x_hi, nx)
    ys = np.linspace(bounds.y_lo, bounds.y_hi, ny)
    gx, gy = np.meshgrid(xs, ys)
    lx, ly, done = converge_many(p, gx.ravel(), gy.ravel(), tol, max_n, settings.cauchy_window)
    labels = match_limits(lx, ly, done, [e.point for e in eqs.nonneg], match_tol).reshape(ny, nx)

    unresolved = int(np.count_nonzero(labels == UNRESOLVED))
    if unresolved:
        logger.warning("%d of %d grid points unresolved", unresolved, nx * ny)
    return BasinGrid(bounds=bounds, resolution=(nx, ny), labels=labels, xs=xs, ys=ys)


# =============================================================================
# SEPARATRIX
# =============================================================================

def separatrix(
    p: ModelParams,
    eqs: EquilibriumSet,
    nx: int,
    width_tol: float = 1e-8,
    tol: Optional[float] = None,
    max_n: Optional[int] = None,
) -> Separatrix:
    """
    Trace the boundary between the two basins in the bistable regime.

    For each abscissa y is bisected between a point that goes to the
    south-east attractor and one that goes to the north-west attractor.
    All abscissae are bisected in lockstep.

    Raises:
        RegimeError: eqs is not a bistable configuration
    """
    if eqs.prediction.kind is not BehaviorKind.BISTABLE:
        raise RegimeError(f"separatrix needs the bistable regime, got {eqs.prediction.kind.value}")
    if nx < 2:
        raise ValidationError("nx", "nx must be >= 2")
    settings = get_settings()
    tol = settings.default_tol if tol is None else tol
    max_n = settings.max_steps if max_n is None else max_n
    window = settings.cauchy_window

    e1, saddle, e3 = eqs.nonneg
    targets = [e1.point, saddle.point, e3.point]
    box = trapping_box(p)
    x2 = saddle.point.x
    offset = 1e-3 * (1.0 + x2)
    xs = np.unique(np.concatenate([np.linspace(box.x_lo, box.x_hi, nx), [x2 - offset, x2, x2 + offset]]))

    def classify(ys: np.ndarray) -> np.ndarray:
        lx, ly, done = converge_many(p, xs, ys, tol, max_n, window)
        return match_limits(lx, ly, done, targets, settings.match_tol)

    lo = np.zeros_like(xs)
    hi = np.full_like(xs, p.h2 + 2.0 * p.b2)
    lab_lo, lab_hi = classify(lo), classify(hi)
    valid = (lab_lo == 3) & (lab_hi == 1)
    reasons = {}
    for i in np.flatnonzero(~valid):
        reasons[i] = f"bracket ends go to {int(lab_lo[i])} and {int(lab_hi[i])}, expected 3 and 1"

    while True:
        open_ = valid & (hi - lo > width_tol)
        if not open_.any():
            break
        mid = np.where(open_, 0.5 * (lo + hi), lo)
        lab = classify(mid)
        to_e3 = open_ & (lab == 3)
        to_e1 = open_ & (lab == 1)
        on_saddle = open_ & (lab == 2)
        lost = open_ & (lab == UNRESOLVED)
        lo = np.where(to_e3 | on_saddle, mid, lo)
        hi = np.where(to_e1 | on_saddle, mid, hi)
        for i in np.flatnonzero(lost):
            reasons[i] = f"orbit from y = {mid[i]!r} unresolved during bisection"
        valid &= ~lost

    for i, why in sorted(reasons.items()):
        logger.debug("separatrix sample at x = %g absent: %s", xs[i], why)

    ystar = 0.5 * (lo + hi)
    samples = tuple((float(xs[i]), float(ystar[i])) for i in np.flatnonzero(valid))
    width = float(np.max((hi - lo)[valid])) if valid.any() else math.nan

    by_x = dict(samples)
    saddle_error = abs(by_x[x2] - saddle.point.y) if x2 in by_x else math.nan
    local_slope = math.nan
    if (x2 - offset) in by_x and (x2 + offset) in by_x:
        local_slope = (by_x[x2 + offset] - by_x[x2 - offset]) / (2.0 * offset)
    return Separatrix(
        samples=samples,
        bracket_width=width,
        absent=tuple((float(xs[i]), why) for i, why in sorted(reasons.items())),
        saddle_error=saddle_error,
        local_slope=local_slope,
        eigen_slope=stable_direction_slope(saddle.jac),
    )


# =============================================================================
# FOLD SEARCH
# =============================================================================

def fold_search(
    p_base: ModelParams,
    param_name: str,
    lo: float,
    hi: float,
    max_iter: int = 200,
) -> Optional[ModelParams]:
    """
    Bisect one parameter between values with different equilibrium counts
    until two equilibria have merged (count two) and the merging pair is
    within FOLD_SEPARATION (relative) of each other.

    Count-two midpoints are placed by the merging pair: a real pair sits on
    the side with more equilibria, a conjugate pair on the other. If the
    bracket runs out of floating-point room first, the count-two point with
    the tightest pair is returned; None when no count-two point was met.

    Raises:
        BracketError: both ends have the same count
    """
    if param_name not in PARAM_NAMES:
        raise ValidationError("param_name", f"unknown parameter '{param_name}'")
    n_lo = count_nonneg(p_base.replace(**{param_name: lo}))
    n_hi = count_nonneg(p_base.replace(**{param_name: hi}))
    if n_lo == n_hi:
        raise BracketError(f"{param_name} in [{lo}, {hi}]: {n_lo} equilibria at both ends")
    if n_lo == 2:
        return p_base.replace(**{param_name: lo})
    if n_hi == 2:
        return p_base.replace(**{param_name: hi})
    more_at_lo = n_lo > n_hi

    best: Optional[ModelParams] = None
    best_gap = math.inf
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        candidate = p_base.replace(**{param_name: mid})
        n_mid = count_nonneg(candidate)
        if n_mid == 2:
            gap, both_real, x = closest_root_pair(shifted_quartic(candidate))
            rel_gap = gap / (1.0 + abs(x))
            if rel_gap < best_gap:
                best, best_gap = candidate, rel_gap
            if rel_gap <= FOLD_SEPARATION:
                logger.debug("fold at %s = %r, pair %.3e apart", param_name, mid, gap)
                return candidate
            on_lo_side = both_real == more_at_lo
        else:
            on_lo_side = n_mid == n_lo
        if on_lo_side:
            lo = mid
        else:
            hi = mid
    if best is not None:
        logger.warning("fold search on %s ran out of bracket; pair %.3e apart (relative)", param_name, best_gap)
        return best
    logger.warning("fold search on %s stopped at [%r, %r] without a double equilibrium", param_name, lo, hi)
    return None
