import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from conftest import P1_EQ, st_params
from lgin.Scripts.common import DegenerateSlopeError, PoleError
from lgin.Scripts.curves import (
    BRANCHES,
    CurveId,
    ShiftedQuartic,
    closest_root_pair,
    cubic_leading_coefficient,
    implicit_residuals,
    root_clusters,
    scan_intersections,
    shifted_quartic,
    shifted_quartic_y,
    slopes_at,
    y1,
    y1_array,
    y2_array,
    y2_branches,
)
from lgin.Scripts.model import ModelParams, Point, step


# =============================================================================
# explicit branches
# =============================================================================

def test_y1_examples(p1):
    assert y1(p1, 2.0) == pytest.approx(1.0)
    assert implicit_residuals(p1, Point(2.0, 1.0))[0] == pytest.approx(0.0, abs=1e-12)
    assert step(p1, Point(2.0, 1.0)).x == pytest.approx(2.0)
    # cleared-denominator artifact: 1 + x + c1 y = 0 there
    assert y1(p1, 0.0) == pytest.approx(-1.0)
    with pytest.raises(PoleError):
        y1(p1, 0.5)


def test_y2_branches_examples(p1):
    plus, minus = y2_branches(p1, 0.0)
    assert plus == pytest.approx(2.68614, abs=1e-5)
    assert minus == pytest.approx(-0.18614, abs=1e-5)
    # horizontal asymptote y = h2 of the upper branch as x -> +inf
    assert abs(y2_branches(p1, 1e6)[0] - 0.5) < 1e-4


def test_y2_branches_zero_the_c2_polynomial(p1):
    for x in (0.0, 0.7, 3.0, 12.0):
        for y in y2_branches(p1, x):
            assert implicit_residuals(p1, Point(x, y))[1] == pytest.approx(0.0, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(p=st_params(), x=st.floats(-1e3, 1e3))
def test_y2_defined_on_whole_line(p, x):
    # the discriminant is bounded below by 4 h2 b2
    plus, minus = y2_branches(p, x)
    assert plus > minus


def test_y2_on_y_axis(p1):
    # y^2 - 2.5 y - 0.5 = 0
    assert y2_branches(p1, 0.0)[0] == pytest.approx((2.5 + math.sqrt(6.25 + 2.0)) / 2.0)


def test_branch_table():
    assert [b.curve_id for b in BRANCHES] == [CurveId.C1, CurveId.C2_PLUS, CurveId.C2_MINUS]


def test_implicit_residual_examples(p1, p2):
    r1, r2 = implicit_residuals(p1, Point(2.0, 1.0))
    assert r1 == pytest.approx(0.0, abs=1e-12) and abs(r2) > 0.1
    r1, r2 = implicit_residuals(p1, Point(P1_EQ, P1_EQ))
    assert abs(r1) < 1e-10 and abs(r2) < 1e-10
    assert implicit_residuals(p2, Point(0.0, 0.0)) == (-p2.h1, -p2.h2)


def test_branch_monotonicity(p2):
    right = np.linspace(p2.h1 + 1e-3, 50, 2001)
    left = np.linspace(-50, p2.h1 - 1e-3, 2001)
    assert np.all(np.diff(y1_array(p2, right)) < 0)
    assert np.all(np.diff(y1_array(p2, left)) < 0)
    xs = np.linspace(0, 50, 2001)
    assert np.all(np.diff(y2_array(p2, xs, -1)) < 0)


def test_sign_change_limits(p2):
    def gap(x):
        return y1(p2, x) - y2_branches(p2, x)[1]
    assert gap(-1e6) > 0
    assert gap(p2.h1 - 1e-6) < 0


# =============================================================================
# slopes
# =============================================================================

def test_slopes_at_diagonal_equilibrium(p1):
    s = slopes_at(p1, Point(P1_EQ, P1_EQ))
    assert s.s1 == pytest.approx(-2.13148, abs=1e-4)
    assert s.s2 == pytest.approx(-0.46917, abs=1e-4)
    # mirror symmetry across the diagonal
    assert s.s1 * s.s2 == pytest.approx(1.0, rel=1e-12)


def test_slopes_match_branch_derivatives(p1):
    x = 2.0
    pt = Point(x, y1(p1, x))
    h = 1e-6
    fd = (y1(p1, x + h) - y1(p1, x - h)) / (2 * h)
    assert slopes_at(p1, pt).s1 == pytest.approx(fd, abs=1e-5)

    y = y2_branches(p1, x)[0]
    fd2 = (y2_branches(p1, x + h)[0] - y2_branches(p1, x - h)[0]) / (2 * h)
    assert slopes_at(p1, Point(x, y)).s2 == pytest.approx(fd2, abs=1e-5)


def test_slopes_degenerate_on_y_axis(p1):
    with pytest.raises(DegenerateSlopeError):
        slopes_at(p1, Point(0.0, 1.0))


# =============================================================================
# elimination
# =============================================================================

def test_quartic_root_product(p2):
    q = shifted_quartic(p2)
    assert q.effective_degree == 4
    assert q.q4 == pytest.approx(0.75)
    product = np.prod(q.roots())
    assert abs(product.imag) < 1e-9
    assert product.real == pytest.approx(4.0 / 0.75, rel=1e-8)


def test_quartic_degree_drop(p1):
    # c1 c2 = 1 and 1 - b1 - c1 + b2 c1 = 0: only a quadratic remains
    q = shifted_quartic(p1)
    assert q.q4 == 0.0
    assert cubic_leading_coefficient(p1) == 0.0
    assert q.q3 == 0.0
    assert q.effective_degree == 2
    p = ModelParams(b1=3, b2=1, c1=2, c2=0.5, h1=0.5, h2=0.5)
    q = shifted_quartic(p)
    assert q.effective_degree == 3
    assert q.q3 == pytest.approx(cubic_leading_coefficient(p), rel=1e-10)


def test_quartic_in_y(p2):
    q = shifted_quartic_y(p2)
    assert q.variable == "Y" and q.shift == p2.h2
    assert np.prod(q.roots()).real == pytest.approx((p2.b2 * p2.h2) ** 2 / 0.75, rel=1e-8)


@settings(max_examples=300, deadline=None)
@given(p=st_params(0.1, 10.0))
def test_root_product_law(p):
    assume(abs(1.0 - p.c1 * p.c2) > 0.05)
    q = shifted_quartic(p)
    assert q.effective_degree == 4
    expected = (p.b1 * p.h1) ** 2 / (1.0 - p.c1 * p.c2)
    product = complex(np.prod(q.roots()))
    assert abs(product - expected) <= 1e-6 * abs(expected)


def test_quartic_roots_are_intersections(p1, p2, p3):
    for p in (p1, p2, p3):
        q = shifted_quartic(p)
        for x, _ in root_clusters(q.roots(), 1e-6):
            xx = x + p.h1
            y = y1(p, xx)
            r1, r2 = implicit_residuals(p, Point(xx, y))
            scale = 1.0 + xx * xx + y * y
            assert abs(r1) <= 1e-7 * scale and abs(r2) <= 1e-7 * scale


@pytest.mark.parametrize("name", ["p2", "p3"])
def test_elimination_matches_sign_scan(name, request):
    p = request.getfixturevalue(name)
    q = shifted_quartic(p)
    lo, hi = -30.0, 30.0
    roots = [x + p.h1 for x, m in root_clusters(q.roots(), 1e-6) if m == 1]
    roots = [x for x in roots if lo < x < hi and abs(x - p.h1) > 1e-3]
    scanned = scan_intersections(p, lo, hi)
    assert len(scanned) == len(roots)
    for a, b in zip(sorted(roots), scanned):
        assert a == pytest.approx(b, abs=1e-8)


def test_root_clusters():
    roots = np.array([1.0, 1.0 + 1e-9, 2.0, 3.0 + 1e-8j, 5.0 + 1.0j, 5.0 - 1.0j])
    assert root_clusters(roots, 1e-6) == [(pytest.approx(1.0), 2), (2.0, 1), (3.0, 1)]
    assert root_clusters(np.array([], dtype=complex), 1e-6) == []


def test_shifted_quartic_evaluation():
    q = ShiftedQuartic(1.0, 0.0, -5.0, 0.0, 4.0, effective_degree=4)
    # (Z^2 - 1)(Z^2 - 4)
    assert q(1.0) == 0.0 and q(2.0) == 0.0
    assert sorted(r.real for r in q.roots()) == pytest.approx([-2, -1, 1, 2])
    assert q.coefficients == (1.0, 0.0, -5.0, 0.0, 4.0)


def test_closest_root_pair():
    # (Z - 1)(Z - 1.1)(Z^2 + 4), shifted back by 0.5
    q = ShiftedQuartic(1.0, -2.1, 5.1, -8.4, 4.4, effective_degree=4, shift=0.5)
    gap, both_real, x = closest_root_pair(q)
    assert gap == pytest.approx(0.1)
    assert both_real
    assert x == pytest.approx(1.55)
    # (Z^2 + 0.01)(Z - 3)(Z - 5): the nearest pair is the conjugate one
    q = ShiftedQuartic(1.0, -8.0, 15.01, -0.08, 0.15, effective_degree=4)
    gap, both_real, x = closest_root_pair(q)
    assert gap == pytest.approx(0.2)
    assert not both_real
    assert x == pytest.approx(0.0, abs=1e-12)
    assert closest_root_pair(ShiftedQuartic(0.0, 0.0, 0.0, 1.0, 2.0, effective_degree=1))[0] == math.inf
