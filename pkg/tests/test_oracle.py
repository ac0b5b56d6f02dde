import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import comb, gammainc, gammaincc
from scipy.stats import norm

from ldis.distributions import FiniteDiscrete
from ldis.errors import BudgetError
from ldis.events import EventSet
from ldis.oracle import (
    enumerate_exact,
    exact_alpha_exponential,
    exact_alpha_gaussian,
    grid_minimize,
    log_gamma_p,
    log_gamma_q,
    type_class_alpha_rademacher,
)
from ldis.rate_functions import rate
from ldis.distributions import Exponential, Gaussian

BERN = FiniteDiscrete((0.0, 1.0), (0.5, 0.5))


def test_gaussian_examples():
    r = exact_alpha_gaussian(25, EventSet.above(0.8))
    assert r.value == pytest.approx(3.16712418331e-5, rel=1e-10)
    assert r.method == "gaussian-tail"
    assert exact_alpha_gaussian(7, EventSet(((-math.inf, math.inf),))).value == 1.0
    two = exact_alpha_gaussian(100, EventSet.two_sided(1.0, 1.2))
    assert two.value == pytest.approx(norm.sf(10) + norm.sf(12), rel=1e-12)


@given(st.floats(-3, 3), st.floats(0.3, 3), st.floats(-3, 3), st.floats(0.01, 2))
def test_gaussian_n1_and_additivity(mu, s2, a, w):
    sd = math.sqrt(s2)
    iv = EventSet(((a, a + w),))
    want = norm.cdf((a + w - mu) / sd) - norm.cdf((a - mu) / sd)
    assert exact_alpha_gaussian(1, iv, mu, s2).value == pytest.approx(want, rel=1e-9, abs=1e-300)
    left, right = EventSet(((-math.inf, a),)), EventSet(((a + w + 0.1, math.inf),))
    both = left.union(right)
    total = exact_alpha_gaussian(3, left, mu, s2).value + exact_alpha_gaussian(3, right, mu, s2).value
    assert exact_alpha_gaussian(3, both, mu, s2).value == pytest.approx(total, rel=1e-13)


def test_exponential_examples():
    assert exact_alpha_exponential(1, 1.3).value == pytest.approx(math.exp(-1.3), rel=1e-14)
    assert exact_alpha_exponential(5, 1e-12).value == pytest.approx(1.0, abs=1e-12)
    gap = -exact_alpha_exponential(600, 1.3).log_value / 600 - (0.3 - math.log(1.3))
    assert 0 < gap < 0.01
    gap = -exact_alpha_gaussian(600, EventSet.above(0.8)).log_value / 600 - 0.32
    assert 0 < gap < 0.01


@given(st.floats(0.5, 200), st.floats(0.01, 300))
def test_incomplete_gamma_against_scipy(a, x):
    q, p = float(gammaincc(a, x)), float(gammainc(a, x))
    if q > 1e-300:
        assert math.exp(log_gamma_q(a, x)) == pytest.approx(q, rel=1e-10)
    if p > 1e-300:
        assert math.exp(log_gamma_p(a, x)) == pytest.approx(p, rel=1e-10)


def test_exponential_far_tail_is_finite_in_logs():
    r = exact_alpha_exponential(2000, 1.3)
    assert r.value == 0.0 or r.value < 1e-30
    assert -r.log_value / 2000 == pytest.approx(0.3 - math.log(1.3), abs=2e-3)


def test_enumeration_examples():
    A = EventSet.above(0.75)
    q = BERN.tilt(math.log(4.0))
    assert q.mean() == pytest.approx(0.8)
    assert enumerate_exact(BERN, BERN, 8, A).value == pytest.approx(37 / 256, abs=1e-16)
    r = enumerate_exact(BERN, q, 8, A)
    assert r.value == pytest.approx(37 / 256, rel=1e-14)
    assert r.work == 2**8
    second = enumerate_exact(BERN, q, 8, A, xi=2.0).value
    want = sum(comb(8, k) * 0.5**16 / (0.2 ** (8 - k) * 0.8**k) for k in range(6, 9))
    assert second == pytest.approx(want, rel=1e-13)
    assert type_class_alpha_rademacher(8, EventSet.above(0.5)).value == pytest.approx(37 / 256, rel=1e-14)
    with pytest.raises(BudgetError):
        enumerate_exact(BERN, BERN, 30, A)


@st.composite
def discrete_instances(draw):
    k = draw(st.integers(2, 3))
    pts = tuple(sorted(draw(st.lists(st.integers(-4, 4), min_size=k, max_size=k, unique=True))))
    pts = tuple(float(v) for v in pts)

    def law():
        raw = draw(st.lists(st.floats(0.05, 1.0), min_size=k, max_size=k))
        s = math.fsum(raw)
        pr = [v / s for v in raw]
        pr[-1] = 1.0 - math.fsum(pr[:-1])
        return FiniteDiscrete(pts, tuple(pr))

    n = draw(st.integers(1, 10))
    b = draw(st.floats(pts[0], pts[-1]))
    return law(), law(), n, EventSet.above(b)


@given(discrete_instances())
def test_unbiasedness_identity(inst):
    p, q, n, A = inst
    a = enumerate_exact(p, p, n, A).value
    assert enumerate_exact(p, q, n, A).value == pytest.approx(a, rel=1e-12, abs=1e-300)


def test_path_mixture_enumeration_is_unbiased():
    p = FiniteDiscrete((-1.0, 0.0, 1.0), (0.3, 0.4, 0.3))
    q1, q2 = p.tilt(0.9), p.tilt(-1.1)
    A = EventSet.two_sided(0.5, 0.5)
    a = enumerate_exact(p, p, 9, A).value
    assert enumerate_exact(p, [q1, q2], 9, A, proposal_weights=[0.3, 0.7]).value == pytest.approx(a, rel=1e-12)


def test_grid_minimize_examples():
    x, v = grid_minimize(lambda t: 0.5 * t * t, EventSet.above(0.8), 10**5)
    assert v == pytest.approx(0.32, abs=1e-9) and x == pytest.approx(0.8, abs=1e-9)

    # two-sided integrand at r=1, before subtracting the base rate
    def h(x, r=1.0, th=1.0):
        return 0.5 * x * x + 0.5 * max(r - 0.5 * (x - th) ** 2, 0.0)

    _, v = grid_minimize(h, EventSet.two_sided(1.0, 1.2), 10**5)
    assert v == pytest.approx(0.72, abs=1e-9)

    # xi at which the tilt-a moment exponents at x=a and x=-2a coincide
    def gap(xi, a=1.0):
        right = 0.5 * a * a + (xi - 1) * (a * a - 0.5 * a * a)
        left = 2 * a * a + (xi - 1) * (-2 * a * a - 0.5 * a * a)
        return abs(right - left)

    xi, v = grid_minimize(gap, EventSet(((1.0, 3.0),)), 10**4)
    assert xi == pytest.approx(1.5, abs=1e-8)


def test_enumeration_trend_matches_rate():
    # (1/n) log alpha approaches -I at the dominating point
    A = EventSet.above(0.75)
    prev = None
    for n in (4, 8, 12, 16):
        y = -enumerate_exact(BERN, BERN, n, A).log_value / n
        gap = abs(y - rate(BERN, 0.75))
        if prev is not None:
            assert gap < prev
        prev = gap
