"""
Executable checks of the structural results for one parameter set.

Every analysis runs the same published set of checks (CHECK_NAMES) and
reports each as a pass/fail record with a short detail string. A failing
check is a finding about the solver or the theory, not an input error.

Checks:
- pattern_theorem: 1 -> [LAS], 2 -> {LAS, Nonhyperbolic}, 3 -> [LAS, Saddle, LAS]
- slope_eigen_agreement: slope criterion and eigenvalues agree off the fold
- root_product_law: root product and root signs of the shifted quartic
- envelope_sandwich: corner orbits are monotone and squeeze other orbits
- count_bound: 1..3 nonnegative equilibria, at most 4 real ones, one below (h1, h2)
- slope_identity: (s1 - s2) b (1 - d) = (1 - l1)(1 - l2)
- hypothesis_lemma: Jacobian sign pattern and the four inequalities hold
- uniqueness_sufficiency: condA or condB forces a single equilibrium
- mm_identity: the M&m identity vanishes on every M&m solution found
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from lgin.Scripts.common import LGINError, get_settings
from lgin.Scripts.curves import cubic_leading_coefficient, shifted_quartic
from lgin.Scripts.dynamics import envelope, gas_certificate
from lgin.Scripts.equilibria import (
    BehaviorKind,
    EquilibriumSet,
    MmWitness,
    Region,
    UniquenessReport,
    classify_by_slopes,
    find_equilibria,
    hypotheses_hold,
    mm_check,
    mm_search_asymmetric,
    root_sign_structure,
    uniqueness_sufficient,
)
from lgin.Scripts.model import ModelParams, Point, step, trapping_box

logger = logging.getLogger(__name__)

CHECK_NAMES = (
    "pattern_theorem",
    "slope_eigen_agreement",
    "root_product_law",
    "envelope_sandwich",
    "count_bound",
    "slope_identity",
    "hypothesis_lemma",
    "uniqueness_sufficiency",
    "mm_identity",
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class AnalysisReport:
    params: ModelParams
    equilibria: EquilibriumSet
    uniqueness: UniquenessReport
    gas_certified: Optional[bool]
    theorem_checks: Tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.theorem_checks)

    def failed(self) -> List[str]:
        return [c.name for c in self.theorem_checks if not c.passed]


def _se_leq_slack(a: Point, b: Point, slack: float) -> bool:
    return a.x <= b.x + slack and a.y >= b.y - slack


# =============================================================================
# INDIVIDUAL CHECKS
# =============================================================================

def check_pattern_theorem(p: ModelParams, eqs: EquilibriumSet, gas: Optional[bool]) -> CheckResult:
    labels = eqs.labels
    if eqs.count == 1:
        ok = labels == ["LAS"] and gas is not False
    elif eqs.count == 2:
        ok = sorted(labels) == ["LAS", "Nonhyperbolic"]
    elif eqs.count == 3:
        ok = labels == ["LAS", "Saddle", "LAS"]
    else:
        ok = False
    ordered = all(a.point.se_leq(b.point) for a, b in zip(eqs.nonneg, eqs.nonneg[1:]))
    detail = f"labels {labels}, gas {gas}, se-ordered {ordered}"
    return CheckResult("pattern_theorem", ok and ordered, detail)


def check_slope_eigen_agreement(p: ModelParams, eqs: EquilibriumSet) -> CheckResult:
    tol_h = get_settings().hyperbolicity_tol
    mismatches = []
    for i, e in enumerate(eqs.nonneg):
        if abs(e.eig.lambda1 - 1.0) <= tol_h:
            continue
        by_slope = classify_by_slopes(e.slopes, -1 if e.jac.b < 0 else 1)
        if by_slope.label is not e.classification.label:
            mismatches.append(f"#{i + 1}: eigen {e.label.value} vs slopes {by_slope.label.value}")
    return CheckResult("slope_eigen_agreement", not mismatches, "; ".join(mismatches) or "all hyperbolic equilibria agree")


def check_root_product_law(p: ModelParams) -> CheckResult:
    q = shifted_quartic(p)
    c1c2 = p.c1 * p.c2
    notes = []
    ok = True
    if abs(1.0 - c1c2) > 1e-12:
        expected = (p.b1 * p.h1) ** 2 / (1.0 - c1c2)
        product = complex(np.prod(q.roots()))
        rel = abs(product - expected) / abs(expected)
        ok &= q.effective_degree == 4 and rel <= 1e-8
        notes.append(f"root product rel. error {rel:.2e}")
    else:
        lead = cubic_leading_coefficient(p)
        ok &= q.effective_degree <= 3
        notes.append(f"degree {q.effective_degree}, cubic coefficient {lead:.6g}")

    if c1c2 <= 1.0:
        signs = sorted(root_sign_structure(q))
        if c1c2 < 1.0 - 1e-12:
            expected_signs = ["+", "+", "-", "-"]
        elif q.effective_degree == 3:
            lead = cubic_leading_coefficient(p)
            expected_signs = ["+", "-", "-"] if lead < 0 else ["+", "+", "-"]
        else:
            expected_signs = ["+", "-"]
        ok &= signs == sorted(expected_signs)
        notes.append(f"root signs {''.join(signs)}")
    return CheckResult("root_product_law", bool(ok), ", ".join(notes))


def check_envelope_sandwich(p: ModelParams, n: int = 200, n_orbits: int = 5, seed: int = 0) -> CheckResult:
    env = envelope(p, n)
    box = trapping_box(p)
    slack = 1e-12 * (1.0 + box.x_hi + box.y_hi)
    lower, upper = env.lower_seq, env.upper_seq
    ok = all(_se_leq_slack(a, b, slack) for a, b in zip(lower, lower[1:]))
    ok &= all(_se_leq_slack(b, a, slack) for a, b in zip(upper, upper[1:]))
    ok &= all(_se_leq_slack(a, b, slack) for a, b in zip(lower, upper))

    rng = np.random.default_rng(seed)
    for _ in range(n_orbits):
        pt = Point(*(rng.random(2) * [box.x_hi * 1.5, box.y_hi * 1.5]))
        for k in range(n):
            pt = step(p, pt)
            if not (_se_leq_slack(lower[k], pt, slack) and _se_leq_slack(pt, upper[k], slack)):
                return CheckResult("envelope_sandwich", False, f"orbit escapes the envelope at step {k + 1}")
    return CheckResult("envelope_sandwich", bool(ok), f"final gap {env.gaps()[-1]:.3e}")


def check_count_bound(p: ModelParams, eqs: EquilibriumSet) -> CheckResult:
    below = [e for e in eqs.all if e.region is Region.OTHER and e.point.x < p.h1 and e.point.y < p.h2]
    ok = 1 <= eqs.count <= 3 and len(eqs.all) <= 4 and len(below) >= 1
    return CheckResult("count_bound", ok, f"{eqs.count} nonnegative, {len(eqs.all)} real, {len(below)} below (h1, h2)")


def check_slope_identity(p: ModelParams, eqs: EquilibriumSet) -> CheckResult:
    worst = 0.0
    for e in eqs.nonneg:
        lhs = e.slopes.gap * e.jac.b * (1.0 - e.jac.d)
        rhs = (1.0 - e.eig.lambda1) * (1.0 - e.eig.lambda2)
        worst = max(worst, abs(lhs - rhs) / (max(abs(lhs), abs(rhs)) + 1e-14))
    return CheckResult("slope_identity", worst <= 1e-8, f"worst rel. defect {worst:.2e}")


def check_hypothesis_lemma(p: ModelParams, eqs: EquilibriumSet) -> CheckResult:
    bad = []
    for i, e in enumerate(eqs.nonneg):
        j = e.jac
        pattern = j.a > 0 and j.b < 0 and j.c < 0 and j.d > 0 and j.det > 0
        if not (pattern and hypotheses_hold(j)):
            bad.append(f"#{i + 1}")
    return CheckResult("hypothesis_lemma", not bad, f"violations at {', '.join(bad)}" if bad else "holds at every equilibrium")


def check_uniqueness_sufficiency(p: ModelParams, eqs: EquilibriumSet, report: UniquenessReport) -> CheckResult:
    ok = (not report.guaranteed) or eqs.count == 1
    return CheckResult("uniqueness_sufficiency", ok,
                       f"condA {report.condA}, condB {report.condB}, count {eqs.count}")


def check_mm_identity(p: ModelParams, eqs: EquilibriumSet, seed: int = 0) -> CheckResult:
    scale = (1.0 + p.c1 + p.c2) * (1.0 + p.b1 + p.b2 + p.h1 + p.h2) ** 2
    witnesses: List[MmWitness] = [
        mm_check(p, MmWitness(e.point.x, e.point.x, e.point.y, e.point.y)) for e in eqs.nonneg
    ]
    if eqs.prediction.kind is BehaviorKind.BISTABLE:
        e1, _, e3 = eqs.nonneg
        witnesses.append(mm_check(p, MmWitness(e1.point.x, e3.point.x, e3.point.y, e1.point.y)))
    found = mm_search_asymmetric(p, eqs, seed=seed)
    if found is not None:
        witnesses.append(found)

    ok = all(w.system_residual <= 1e-10 and w.identity_residual <= 1e-9 * scale for w in witnesses)
    if eqs.count == 1 and found is not None:
        ok = False
    detail = f"{len(witnesses)} solutions checked, asymmetric witness {'found' if found else 'none'}"
    return CheckResult("mm_identity", ok, detail)


# =============================================================================
# REPORT
# =============================================================================

def run_theorem_checks(
    p: ModelParams, eqs: EquilibriumSet, uniqueness: UniquenessReport, gas: Optional[bool], seed: int = 0,
) -> Tuple[CheckResult, ...]:
    runners: Dict[str, Callable[[], CheckResult]] = {
        "pattern_theorem": lambda: check_pattern_theorem(p, eqs, gas),
        "slope_eigen_agreement": lambda: check_slope_eigen_agreement(p, eqs),
        "root_product_law": lambda: check_root_product_law(p),
        "envelope_sandwich": lambda: check_envelope_sandwich(p, seed=seed),
        "count_bound": lambda: check_count_bound(p, eqs),
        "slope_identity": lambda: check_slope_identity(p, eqs),
        "hypothesis_lemma": lambda: check_hypothesis_lemma(p, eqs),
        "uniqueness_sufficiency": lambda: check_uniqueness_sufficiency(p, eqs, uniqueness),
        "mm_identity": lambda: check_mm_identity(p, eqs, seed=seed),
    }
    results = []
    for name in CHECK_NAMES:
        try:
            result = runners[name]()
        except LGINError as e:
            result = CheckResult(name, False, f"{type(e).__name__}: {e}")
        if not result.passed:
            logger.warning("check %s failed: %s", name, result.detail)
        results.append(result)
    return tuple(results)


def build_analysis_report(p: ModelParams, gas: bool = True, seed: int = 0) -> AnalysisReport:
    eqs = find_equilibria(p)
    uniqueness = uniqueness_sufficient(p)
    gas_certified = gas_certificate(p) if gas else None
    checks = run_theorem_checks(p, eqs, uniqueness, gas_certified, seed=seed)
    return AnalysisReport(params=p, equilibria=eqs, uniqueness=uniqueness,
                          gas_certified=gas_certified, theorem_checks=checks)
