"""
Critical sets of the map.

C1 = {x = f(x, y)} and C2 = {y = g(x, y)} are hyperbolas; their
intersections are the equilibria. This module gives the explicit branches,
the cleared-denominator residuals, the slopes at a point and the quartic
obtained by eliminating y.
"""

import math
import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import List, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from lgin.Scripts.common import DegenerateSlopeError, NoRealBranchError, PoleError
from lgin.Scripts.model import ModelParams, Point, jacobian_values

logger = logging.getLogger(__name__)

# relative size below which a leading coefficient counts as zero
DEGREE_TOL = 1e-14


# =============================================================================
# TYPES
# =============================================================================

class CurveId(str, Enum):
    C1 = "C1"
    C2_PLUS = "C2-plus"
    C2_MINUS = "C2-minus"


@dataclass(frozen=True)
class CurveBranch:
    curve_id: CurveId
    domain: str

    def evaluate(self, p: ModelParams, x: float) -> float:
        if self.curve_id is CurveId.C1:
            return y1(p, x)
        plus, minus = y2_branches(p, x)
        return plus if self.curve_id is CurveId.C2_PLUS else minus


BRANCHES = (
    CurveBranch(CurveId.C1, "x != h1 (vertical asymptote at x = h1)"),
    CurveBranch(CurveId.C2_PLUS, "all x with a nonnegative discriminant; y -> h2 as x -> +inf"),
    CurveBranch(CurveId.C2_MINUS, "all x with a nonnegative discriminant; y -> h2 as x -> -inf"),
)


@dataclass(frozen=True)
class SlopePair:
    s1: float
    s2: float

    @property
    def gap(self) -> float:
        return self.s1 - self.s2


@dataclass(frozen=True)
class ShiftedQuartic:
    """
    Polynomial q4 Z^4 + q3 Z^3 + q2 Z^2 + q1 Z + q0 in a shifted variable.

    `variable` is "X" (Z = x - h1) or "Y" (Z = y - h2); `shift` is h1 or h2.
    """
    q4: float
    q3: float
    q2: float
    q1: float
    q0: float
    effective_degree: int
    variable: str = "X"
    shift: float = 0.0

    @property
    def coefficients(self) -> Tuple[float, float, float, float, float]:
        # descending powers
        return (self.q4, self.q3, self.q2, self.q1, self.q0)

    def as_polynomial(self) -> Polynomial:
        coef = [self.q0, self.q1, self.q2, self.q3, self.q4][: self.effective_degree + 1]
        return Polynomial(coef)

    def roots(self) -> np.ndarray:
        # companion-matrix eigenvalues of the trimmed polynomial
        if self.effective_degree < 1:
            return np.array([], dtype=complex)
        return np.asarray(self.as_polynomial().roots(), dtype=complex)

    def __call__(self, z: float) -> float:
        return float(self.as_polynomial()(z))


# =============================================================================
# EXPLICIT BRANCHES
# =============================================================================

def y1(p: ModelParams, x: float) -> float:
    denom = p.c1 * (p.h1 - x)
    if denom == 0.0:
        raise PoleError(f"C1 has a vertical asymptote at x = h1 = {p.h1}")
    return (x * x + (1.0 - p.b1 - p.h1) * x - p.h1) / denom


def _c2_discriminant(p: ModelParams, x):
    return (-p.b2 - p.h2 + p.c2 * x + 1.0) ** 2 + 4.0 * (p.c2 * x * p.h2 + p.h2)


def y2_branches(p: ModelParams, x: float) -> Tuple[float, float]:
    disc = _c2_discriminant(p, x)
    if disc < 0:
        raise NoRealBranchError(f"C2 has no real branch at x = {x} (discriminant {disc:.3e})")
    root = math.sqrt(disc)
    base = -1.0 + p.b2 + p.h2 - p.c2 * x
    return 0.5 * (base + root), 0.5 * (base - root)


def y1_array(p: ModelParams, xs: np.ndarray) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (xs * xs + (1.0 - p.b1 - p.h1) * xs - p.h1) / (p.c1 * (p.h1 - xs))


def y2_array(p: ModelParams, xs: np.ndarray, sign: int) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    with np.errstate(invalid="ignore"):
        root = np.sqrt(_c2_discriminant(p, xs))
    return 0.5 * (-1.0 + p.b2 + p.h2 - p.c2 * xs + sign * root)


def nearest_c2_branch(p: ModelParams, pt: Point) -> int:
    # +1 or -1: the C2 branch passing closest to pt
    plus, minus = y2_branches(p, pt.x)
    return 1 if abs(plus - pt.y) <= abs(minus - pt.y) else -1


def branch_gap(p: ModelParams, x: float, sign: int) -> float:
    plus, minus = y2_branches(p, x)
    return y1(p, x) - (plus if sign > 0 else minus)


# =============================================================================
# IMPLICIT FORM AND SLOPES
# =============================================================================

def implicit_residuals(p: ModelParams, pt: Point) -> Tuple[float, float]:
    x, y = pt.x, pt.y
    r1 = x * x + p.c1 * x * y + (1.0 - p.b1 - p.h1) * x - p.c1 * p.h1 * y - p.h1
    r2 = y * y + p.c2 * x * y + (1.0 - p.b2 - p.h2) * y - p.c2 * p.h2 * x - p.h2
    return r1, r2


def slopes_at(p: ModelParams, pt: Point) -> SlopePair:
    """
    Slopes of C1 and C2 through pt from the Jacobian:
    s1 = (1 - f_x) / f_y and s2 = g_x / (1 - g_y).
    """
    jac = jacobian_values(p, pt.x, pt.y)
    if jac.b == 0.0:
        raise DegenerateSlopeError(f"f_y vanishes at ({pt.x}, {pt.y}); C1 slope undefined")
    if jac.d >= 1.0:
        raise DegenerateSlopeError(f"g_y = {jac.d} >= 1 at ({pt.x}, {pt.y}); C2 slope undefined")
    return SlopePair(s1=(1.0 - jac.a) / jac.b, s2=jac.c / (1.0 - jac.d))


# =============================================================================
# ELIMINATION
# =============================================================================

def _effective_degree(coef_desc: List[float]) -> int:
    scale = max(abs(c) for c in coef_desc) or 1.0
    degree = len(coef_desc) - 1
    for c in coef_desc:
        if abs(c) > DEGREE_TOL * scale:
            return degree
        degree -= 1
    return 0


def shifted_quartic(p: ModelParams) -> ShiftedQuartic:
    """
    Eliminate y between the two conics and shift to X = x - h1.

    y = N(x) / Dn(x) with N = x^2 + (1 - b1 - h1) x - h1, Dn = c1 (h1 - x) is
    substituted into the C2 polynomial, which is multiplied through by Dn^2.
    The result has leading coefficient 1 - c1 c2 and constant b1^2 h1^2 with
    no further scaling; the leading coefficient (and, when c1 c2 = 1, the
    cubic one) is then pinned to its exact value so that the degenerations
    are exact.
    """
    x = Polynomial([0.0, 1.0])
    n = x * x + (1.0 - p.b1 - p.h1) * x - p.h1
    dn = p.c1 * (p.h1 - x)
    cleared = (n * n
               + p.c2 * x * n * dn
               + (1.0 - p.b2 - p.h2) * n * dn
               - (p.c2 * p.h2 * x + p.h2) * dn * dn)
    shifted = cleared(Polynomial([p.h1, 1.0]))

    coef = list(shifted.coef) + [0.0] * (5 - len(shifted.coef))
    coef[4] = 1.0 - p.c1 * p.c2
    if coef[4] == 0.0:
        coef[3] = cubic_leading_coefficient(p)
    coef[0] = (p.b1 * p.h1) ** 2
    desc = [float(c) for c in reversed(coef[:5])]
    degree = _effective_degree(desc)
    logger.debug("shifted quartic %s, effective degree %d", desc, degree)
    return ShiftedQuartic(*desc, effective_degree=degree, variable="X", shift=p.h1)


def shifted_quartic_y(p: ModelParams) -> ShiftedQuartic:
    # same elimination with the species exchanged: a quartic in Y = y - h2
    q = shifted_quartic(p.swapped())
    return ShiftedQuartic(q.q4, q.q3, q.q2, q.q1, q.q0,
                          effective_degree=q.effective_degree, variable="Y", shift=p.h2)


def cubic_leading_coefficient(p: ModelParams) -> float:
    # X^3 coefficient of the shifted quartic when c1 c2 = 1
    return 1.0 - p.b1 - p.c1 + p.b2 * p.c1


def root_clusters(roots: np.ndarray, tol: float) -> List[Tuple[float, int]]:
    """
    Group (nearly) real roots into clusters.

    A root counts as real when |Im z| <= tol (1 + |z|); real roots closer than
    tol (1 + |r|) are merged. Returns (mean value, multiplicity) pairs sorted
    ascending.
    """
    reals = sorted(float(z.real) for z in np.atleast_1d(roots)
                   if abs(z.imag) <= tol * (1.0 + abs(z)))
    clusters: List[List[float]] = []
    for r in reals:
        if clusters and abs(r - clusters[-1][-1]) <= tol * (1.0 + abs(r)):
            clusters[-1].append(r)
        else:
            clusters.append([r])
    return [(float(np.mean(c)), len(c)) for c in clusters]


def closest_root_pair(q: ShiftedQuartic) -> Tuple[float, bool, float]:
    """
    The two roots of q nearest to each other, complex ones included.

    Returns (|z1 - z2|, both real, mean real part shifted back by q.shift).
    Near a fold this is the merging pair: real on the side with more
    equilibria, a conjugate pair past it.
    """
    roots = q.roots()
    if len(roots) < 2:
        return math.inf, False, math.nan
    z1, z2 = min(combinations(roots, 2), key=lambda z: abs(z[0] - z[1]))
    both_real = z1.imag == 0.0 and z2.imag == 0.0
    return float(abs(z1 - z2)), bool(both_real), float(0.5 * (z1.real + z2.real)) + q.shift


def scan_intersections(p: ModelParams, x_lo: float, x_hi: float, n: int = 200001) -> List[float]:
    """
    Brute-force x-coordinates of C1 meet C2 by sign changes of y1 - y2(+/-).

    Only transversal crossings are seen. Intervals that straddle the pole of
    y1 are skipped.
    """
    xs = np.linspace(x_lo, x_hi, n)
    found: List[float] = []
    for sign in (1, -1):
        gap = y1_array(p, xs) - y2_array(p, xs, sign)
        ok = np.isfinite(gap[:-1]) & np.isfinite(gap[1:])
        straddle = (xs[:-1] - p.h1) * (xs[1:] - p.h1) <= 0
        change = ok & ~straddle & (np.sign(gap[:-1]) * np.sign(gap[1:]) < 0)
        for i in np.flatnonzero(change):
            lo, hi = float(xs[i]), float(xs[i + 1])
            g_lo = branch_gap(p, lo, sign)
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if mid in (lo, hi):
                    break
                g_mid = branch_gap(p, mid, sign)
                if (g_mid < 0) == (g_lo < 0):
                    lo, g_lo = mid, g_mid
                else:
                    hi = mid
            found.append(0.5 * (lo + hi))
    return sorted(found)
