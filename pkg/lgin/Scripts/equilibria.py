"""
Equilibria of the map: location, contact order, local stability and the
global behaviour predicted by their number.

Equilibria are found algebraically (roots of the shifted quartic seed a
2-D Newton polish on the rational fixed-point equations) and classified
twice, once from the eigenvalues of the Jacobian and once from the slopes
of the critical curves. For b < 0 the two agree through

    y1'(x) - y2'(x) = (1 - lambda1)(1 - lambda2) / (b (1 - d)).

Classification claims are only made on the nonnegative quadrant.
"""

import math
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import combinations
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from lgin.Scripts.common import (
    ContactOrderError,
    DomainError,
    HypothesisError,
    LGINError,
    SolverError,
    ValidationError,
    get_settings,
)
from lgin.Scripts.curves import (
    SlopePair,
    branch_gap,
    nearest_c2_branch,
    root_clusters,
    shifted_quartic,
    ShiftedQuartic,
    slopes_at,
    y1,
    y2_branches,
)
from lgin.Scripts.model import (
    Jacobian2,
    ModelParams,
    Point,
    fixed_point_residual,
    jacobian_values,
    map_values,
    trapping_box,
)

logger = logging.getLogger(__name__)


# =============================================================================
# TYPES
# =============================================================================

class Stability(str, Enum):
    LAS = "LAS"
    SADDLE = "Saddle"
    NONHYPERBOLIC = "Nonhyperbolic"


class Region(str, Enum):
    NONNEG = "NonnegativeQuadrant"
    OTHER = "Other"


class BehaviorKind(str, Enum):
    UNIQUE_GAS = "UniqueGAS"
    FOLD_PAIR = "FoldPair"
    BISTABLE = "Bistable"


@dataclass(frozen=True)
class EigenPair:
    # lambda1 has the larger absolute value
    lambda1: float
    lambda2: float


@dataclass(frozen=True)
class Classification:
    label: Stability
    margin: Optional[float] = None  # lambda1 - 1; None when classified by slopes


@dataclass(frozen=True)
class Equilibrium:
    point: Point
    jac: Jacobian2
    contact_order: int
    region: Region
    residual: float
    eig: Optional[EigenPair] = None
    slopes: Optional[SlopePair] = None
    classification: Optional[Classification] = None

    @property
    def label(self) -> Optional[Stability]:
        return self.classification.label if self.classification else None


@dataclass(frozen=True)
class GlobalBehavior:
    kind: BehaviorKind
    details: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class EquilibriumSet:
    all: Tuple[Equilibrium, ...]
    nonneg: Tuple[Equilibrium, ...]
    prediction: GlobalBehavior

    @property
    def count(self) -> int:
        return len(self.nonneg)

    @property
    def labels(self) -> List[str]:
        return [e.label.value for e in self.nonneg]


@dataclass(frozen=True)
class UniquenessReport:
    condA: bool
    condB: bool
    guaranteed: bool


@dataclass(frozen=True)
class MmWitness:
    m: float
    M: float
    mbar: float
    Mbar: float
    system_residual: float = math.nan
    identity_residual: float = math.nan


# =============================================================================
# LOCAL STABILITY
# =============================================================================

def failed_hypothesis(jac: Jacobian2) -> Optional[str]:
    # first violated inequality of 0<a<1, 0<d<1, bc>0, 1+(a+d)+ad-bc>0
    if not 0.0 < jac.a < 1.0:
        return "0 < a < 1"
    if not 0.0 < jac.d < 1.0:
        return "0 < d < 1"
    if not jac.b * jac.c > 0.0:
        return "b*c > 0"
    if not 1.0 + jac.trace + jac.det > 0.0:
        return "1 + (a+d) + ad - bc > 0"
    return None


def hypotheses_hold(jac: Jacobian2) -> bool:
    return failed_hypothesis(jac) is None


def classify_by_eigen(jac: Jacobian2, tol_h: Optional[float] = None) -> Tuple[EigenPair, Classification]:
    if tol_h is None:
        tol_h = get_settings().hyperbolicity_tol
    failed = failed_hypothesis(jac)
    if failed is not None:
        raise HypothesisError(failed, f"Jacobian {jac} violates {failed}")

    # discriminant (a-d)^2 + 4bc is positive because bc > 0
    root = math.sqrt((jac.a - jac.d) ** 2 + 4.0 * jac.b * jac.c)
    lam1 = 0.5 * (jac.trace + root)
    lam2 = jac.det / lam1

    if lam1 < 1.0 - tol_h:
        label = Stability.LAS
    elif lam1 > 1.0 + tol_h:
        label = Stability.SADDLE
    else:
        label = Stability.NONHYPERBOLIC
    return EigenPair(lam1, lam2), Classification(label, lam1 - 1.0)


def classify_by_slopes(slopes: SlopePair, b_sign: int, tol_s: Optional[float] = None) -> Classification:
    if tol_s is None:
        tol_s = get_settings().slope_tol
    if b_sign == 0:
        raise ValidationError("b_sign", "b_sign must be nonzero")
    gap = slopes.gap
    if abs(gap) <= tol_s * (1.0 + abs(slopes.s1) + abs(slopes.s2)):
        return Classification(Stability.NONHYPERBOLIC)
    stable = gap < 0 if b_sign < 0 else gap > 0
    return Classification(Stability.LAS if stable else Stability.SADDLE)


def slope_identity_defect(jac: Jacobian2, eig: EigenPair, slopes: SlopePair) -> float:
    # |(s1 - s2) - (1 - l1)(1 - l2) / (b (1 - d))|
    rhs = (1.0 - eig.lambda1) * (1.0 - eig.lambda2) / (jac.b * (1.0 - jac.d))
    return abs(slopes.gap - rhs)


# =============================================================================
# SOLVER
# =============================================================================

def _polish(p: ModelParams, x0: float, y0: float, max_iter: int, target: float) -> Tuple[float, float, float]:
    # Newton on T(x, y) - (x, y); keeps the best iterate seen
    x, y = x0, y0
    best = (x, y, fixed_point_residual(p, x, y))
    for _ in range(max_iter):
        if best[2] <= target:
            break
        try:
            fx, gy = map_values(p, x, y)
        except ZeroDivisionError:
            break
        jac = jacobian_values(p, x, y)
        mat = np.array([[jac.a - 1.0, jac.b], [jac.c, jac.d - 1.0]])
        try:
            dx, dy = np.linalg.solve(mat, [x - fx, y - gy])
        except np.linalg.LinAlgError:
            break
        x, y = x + float(dx), y + float(dy)
        if not (math.isfinite(x) and math.isfinite(y)):
            break
        r = fixed_point_residual(p, x, y)
        if r < best[2]:
            best = (x, y, r)
    return best


def _is_spurious(p: ModelParams, x: float, y: float) -> bool:
    # cleared-denominator points: 1 + x + c1 y = 0 or 1 + y + c2 x = 0
    scale = 1.0 + abs(x) + abs(y)
    return abs(1.0 + x + p.c1 * y) <= 1e-8 * scale or abs(1.0 + y + p.c2 * x) <= 1e-8 * scale


def _far_field(p: ModelParams, x: float, y: float) -> bool:
    return max(abs(x), abs(y)) > 1e6 * (1.0 + p.b1 + p.b2 + p.h1 + p.h2)


def _acceptance(residual_tol: float, x: float, y: float, term_scale: float) -> float:
    # residual floor grows with the size of the terms in T(x, y) - (x, y)
    return residual_tol * (1.0 + abs(x) + abs(y) + term_scale)


def _candidates(p: ModelParams, quartic: ShiftedQuartic, cluster_tol: float) -> List[Tuple[float, float, int]]:
    seeds = []
    for root, mult in root_clusters(quartic.roots(), cluster_tol):
        x = root + p.h1
        try:
            y = y1(p, x)
        except ZeroDivisionError:
            continue
        seeds.append((x, y, mult))
    return seeds


def _classify(p: ModelParams, pt: Point, order: int, residual: float,
              tol_h: float, tol_s: float) -> Equilibrium:
    jac = jacobian_values(p, pt.x, pt.y)
    if pt.x < 0 or pt.y < 0:
        return Equilibrium(point=pt, jac=jac, contact_order=order, region=Region.OTHER, residual=residual)

    eig, classification = classify_by_eigen(jac, tol_h)
    slopes = slopes_at(p, pt)
    if order >= 2:
        # tangential contact means s1 = s2, hence lambda1 = 1
        classification = Classification(Stability.NONHYPERBOLIC, classification.margin)
    return Equilibrium(point=pt, jac=jac, contact_order=order, region=Region.NONNEG,
                       residual=residual, eig=eig, slopes=slopes, classification=classification)


def _prediction(nonneg: List[Equilibrium]) -> GlobalBehavior:
    n = len(nonneg)
    if n == 1:
        return GlobalBehavior(BehaviorKind.UNIQUE_GAS, {"attractor": 0})
    if n == 2:
        nonhyp = [i for i, e in enumerate(nonneg) if e.label is Stability.NONHYPERBOLIC]
        j = nonhyp[0] if nonhyp else max(range(2), key=lambda i: nonneg[i].contact_order)
        return GlobalBehavior(BehaviorKind.FOLD_PAIR, {"attractor": 1 - j, "nonhyperbolic": j})
    if n == 3:
        return GlobalBehavior(BehaviorKind.BISTABLE, {"attractors": [0, 2], "saddle": 1})
    raise SolverError(f"found {n} nonnegative equilibria; expected between one and three")


def find_equilibria(
    p: ModelParams,
    *,
    cluster_tol: Optional[float] = None,
    residual_tol: Optional[float] = None,
    tol_h: Optional[float] = None,
    tol_s: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> EquilibriumSet:
    """
    All real equilibria, the nonnegative ones sorted in the south-east order,
    and the global behaviour predicted from their number.

    Raises:
        SolverError: a quartic-root seed in the nonnegative quadrant did not
            polish to a fixed point
    """
    settings = get_settings()
    cluster_tol = settings.cluster_tol if cluster_tol is None else cluster_tol
    residual_tol = settings.residual_tol if residual_tol is None else residual_tol
    tol_h = settings.hyperbolicity_tol if tol_h is None else tol_h
    tol_s = settings.slope_tol if tol_s is None else tol_s
    max_iter = settings.newton_max_iter if max_iter is None else max_iter

    quartic = shifted_quartic(p)
    term_scale = p.h1 + p.h2 + p.b1 + p.b2
    polished: List[Tuple[float, float, int, float]] = []
    for x0, y0, mult in _candidates(p, quartic, cluster_tol):
        scale = 1.0 + max(abs(x0), abs(y0))
        x, y, r = _polish(p, x0, y0, max_iter, 1e-3 * residual_tol)
        if r > _acceptance(residual_tol, x, y, term_scale):
            if _is_spurious(p, x0, y0):
                logger.debug("dropping cleared-denominator point (%g, %g)", x0, y0)
                continue
            if _far_field(p, x0, y0):
                logger.warning("dropping far-field quartic root (%g, %g), residual %g", x0, y0, r)
                continue
            if x0 < 0 or y0 < 0:
                # outside the quadrant only the location matters (count bound)
                if x >= 0 and y >= 0:
                    x, y, r = x0, y0, fixed_point_residual(p, x0, y0)
                logger.warning("keeping off-quadrant equilibrium (%g, %g) at residual %.3e", x, y, r)
            else:
                raise SolverError(f"Newton did not converge from quartic seed ({x0}, {y0}); residual {r:.3e}",
                                  seed=(x0, y0))
        if abs(x - x0) > 1e-2 * scale:
            logger.debug("seed (%g, %g) polished far away to (%g, %g)", x0, y0, x, y)

        # merge with an already polished equilibrium
        for i, (xe, ye, me, re) in enumerate(polished):
            if abs(x - xe) <= cluster_tol * (1.0 + abs(x)) and abs(y - ye) <= cluster_tol * (1.0 + abs(y)):
                polished[i] = (xe, ye, me + mult, min(re, r))
                break
        else:
            polished.append((x, y, mult, r))

    equilibria = [
        _classify(p, Point(x, y), min(mult, 3), r, tol_h, tol_s)
        for x, y, mult, r in sorted(polished)
    ]
    nonneg = [e for e in equilibria if e.region is Region.NONNEG]
    nonneg.sort(key=lambda e: (e.point.x, -e.point.y))
    return EquilibriumSet(all=tuple(equilibria), nonneg=tuple(nonneg), prediction=_prediction(nonneg))


def count_nonneg(p: ModelParams) -> int:
    return find_equilibria(p).count


# =============================================================================
# CONTACT ORDER
# =============================================================================

def _fd_transversal(p: ModelParams, eq: Equilibrium, tol: float) -> bool:
    # is y1 - y2 crossing zero with nonzero slope at the equilibrium?
    x = eq.point.x
    sign = nearest_c2_branch(p, eq.point)
    h = 1e-4 * (1.0 + abs(x))
    if abs(x - p.h1) > 0:
        h = min(h, 0.1 * abs(x - p.h1))
    d1 = (branch_gap(p, x + h, sign) - branch_gap(p, x - h, sign)) / (2.0 * h)
    dy1 = (y1(p, x + h) - y1(p, x - h)) / (2.0 * h)
    plus_hi, minus_hi = y2_branches(p, x + h)
    plus_lo, minus_lo = y2_branches(p, x - h)
    dy2 = ((plus_hi - plus_lo) if sign > 0 else (minus_hi - minus_lo)) / (2.0 * h)
    return abs(d1) > tol * (1.0 + abs(dy1) + abs(dy2))


def contact_order(p: ModelParams, eq: Equilibrium, contact_slope_tol: Optional[float] = None) -> int:
    """
    Order of contact of C1 and C2 at eq.

    The primary estimate is the multiplicity of the quartic root; it is
    cross-checked against the finite-difference slope of y1 - y2 at the point.

    Raises:
        ContactOrderError: the two estimates disagree on transversality
    """
    tol = get_settings().contact_slope_tol if contact_slope_tol is None else contact_slope_tol
    cluster = eq.contact_order
    transversal = _fd_transversal(p, eq, tol)
    if transversal and cluster >= 2:
        raise ContactOrderError(
            f"root multiplicity {cluster} but curves cross transversally at {eq.point}",
            cluster_order=cluster, slope_order=1)
    if not transversal and cluster == 1:
        raise ContactOrderError(
            f"simple root but curves are tangent at {eq.point}",
            cluster_order=cluster, slope_order=2)
    return cluster


# =============================================================================
# UNIQUENESS CONDITIONS AND THE M&m SYSTEM
# =============================================================================

def uniqueness_sufficient(p: ModelParams) -> UniquenessReport:
    cond_a = (1.0 - p.b1 + p.h1 + p.c1 * p.h2 >= 0.0) and (1.0 - p.b2 + p.h2 + p.c2 * p.h1 >= 0.0)
    cond_b = p.c1 * p.c2 <= 1.0
    return UniquenessReport(condA=cond_a, condB=cond_b, guaranteed=cond_a or cond_b)


def root_sign_structure(q: ShiftedQuartic, tol: Optional[float] = None) -> List[str]:
    # signs of the real roots (with multiplicity), negatives first
    tol = get_settings().cluster_tol if tol is None else tol
    signs: List[str] = []
    for root, mult in root_clusters(q.roots(), tol):
        signs.extend(["-" if root < 0 else "+"] * mult)
    return signs


def _mm_vector(p: ModelParams, w: np.ndarray) -> np.ndarray:
    m, M, mb, Mb = w
    f_lo, g_hi = map_values(p, m, Mb)
    f_hi, g_lo = map_values(p, M, mb)
    return np.array([f_lo - m, f_hi - M, g_lo - mb, g_hi - Mb])


def _mm_jacobian(p: ModelParams, w: np.ndarray) -> np.ndarray:
    m, M, mb, Mb = w
    lo = jacobian_values(p, m, Mb)
    hi = jacobian_values(p, M, mb)
    return np.array([
        [lo.a - 1.0, 0.0, 0.0, lo.b],
        [0.0, hi.a - 1.0, hi.b, 0.0],
        [0.0, hi.c, hi.d - 1.0, 0.0],
        [lo.c, 0.0, 0.0, lo.d - 1.0],
    ])


def mm_identity(p: ModelParams, m: float, M: float, mbar: float, Mbar: float) -> float:
    # algebraic consequence of the M&m system; zero whenever the system holds
    alpha = 1.0 - p.b1 + p.h1 + p.c1 * p.h2
    beta = 1.0 - p.b2 + p.h2 + p.c2 * p.h1
    return (p.c2 * (M - m) * ((m - p.h1) + (M - p.h1) + alpha)
            + p.c1 * (Mbar - mbar) * ((mbar - p.h2) + (Mbar - p.h2) + beta))


def mm_check(p: ModelParams, w: MmWitness) -> MmWitness:
    for name in ("m", "M", "mbar", "Mbar"):
        if getattr(w, name) < 0:
            raise DomainError(f"witness component {name} = {getattr(w, name)} is negative")
    vec = np.array([w.m, w.M, w.mbar, w.Mbar])
    system = float(np.max(np.abs(_mm_vector(p, vec))))
    identity = abs(mm_identity(p, w.m, w.M, w.mbar, w.Mbar))
    return replace(w, system_residual=system, identity_residual=identity)


def _mm_newton(p: ModelParams, w0: np.ndarray, max_iter: int, lower: np.ndarray) -> Optional[np.ndarray]:
    w = w0.copy()
    try:
        F = _mm_vector(p, w)
    except ZeroDivisionError:
        return None
    norm = float(np.max(np.abs(F)))
    for _ in range(max_iter):
        if norm <= 1e-13:
            return w
        try:
            delta = np.linalg.solve(_mm_jacobian(p, w), -F)
        except np.linalg.LinAlgError:
            return None
        t = 1.0
        for _ in range(30):
            trial = w + t * delta
            if np.all(trial >= lower):
                F_trial = _mm_vector(p, trial)
                n_trial = float(np.max(np.abs(F_trial)))
                if n_trial < norm:
                    w, F, norm = trial, F_trial, n_trial
                    break
            t *= 0.5
        else:
            break
    return w if norm <= 1e-12 else None


def mm_search_asymmetric(
    p: ModelParams,
    eqs: Optional[EquilibriumSet] = None,
    n_seeds: int = 100,
    seed: int = 0,
    min_gap: float = 1e-6,
) -> Optional[MmWitness]:
    """
    Look for a solution of the M&m system with M - m >= min_gap.

    Damped Newton from n_seeds random starts in the trapping box, plus starts
    built from pairs of nonnegative equilibria. Returns the widest witness
    found, or None.
    """
    box = trapping_box(p)
    rng = np.random.default_rng(seed)
    lo = np.array([box.x_lo, box.x_lo, box.y_lo, box.y_lo])
    hi = np.array([box.x_hi, box.x_hi, box.y_hi, box.y_hi])
    starts = [lo + rng.random(4) * (hi - lo) for _ in range(n_seeds)]

    if eqs is None:
        try:
            eqs = find_equilibria(p)
        except LGINError as e:
            logger.warning("M&m search without equilibrium seeds: %s", e)
    if eqs is not None:
        for e1, e2 in combinations(eqs.nonneg, 2):
            starts.append(np.array([e1.point.x, e2.point.x, e2.point.y, e1.point.y]))

    best: Optional[MmWitness] = None
    slack = 1e-9 * (1.0 + float(np.max(hi)))
    for w0 in starts:
        w = _mm_newton(p, w0, 60, np.zeros(4))
        if w is None:
            continue
        m, M, mb, Mb = (float(v) for v in w)
        if m > M:
            m, M, mb, Mb = M, m, Mb, mb
        if M - m < min_gap or mb > Mb:
            continue
        if np.any(np.array([m, M, mb, Mb]) < lo - slack) or np.any(np.array([m, M, mb, Mb]) > hi + slack):
            continue
        witness = mm_check(p, MmWitness(m, M, mb, Mb))
        if best is None or witness.M - witness.m > best.M - best.m:
            best = witness
    return best
