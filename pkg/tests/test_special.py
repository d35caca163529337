import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tradehurst.special import digamma, hurwitz_zeta2


def direct_series(v, terms=10_000_000):
    """Plain summation of 1/(v+k)^2 plus the two leading tail terms beyond the cut."""
    k = np.arange(terms, dtype=np.float64)
    head = math.fsum(1.0 / (v + k) ** 2)
    x = v + terms
    return head + 1.0 / x + 0.5 / x ** 2


def test_zeta_at_one():
    assert hurwitz_zeta2(1.0) == pytest.approx(math.pi ** 2 / 6, rel=1e-10)


def test_zeta_at_two():
    assert hurwitz_zeta2(2.0) == pytest.approx(math.pi ** 2 / 6 - 1, rel=1e-10)


def test_zeta_half():
    assert hurwitz_zeta2(0.5) == pytest.approx(math.pi ** 2 / 2, rel=1e-12)


def test_large_argument_against_series():
    v = 11700.0
    assert hurwitz_zeta2(v) == pytest.approx(direct_series(v), rel=1e-8)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-3, 1e7))
def test_against_mpmath(v):
    assert hurwitz_zeta2(v) == pytest.approx(float(mpmath.zeta(2, v)), rel=1e-12)
    assert digamma(v) == pytest.approx(float(mpmath.digamma(v)), rel=1e-12, abs=1e-13)


def test_recurrence():
    for v in (0.3, 2.5, 15.9, 16.1):
        assert hurwitz_zeta2(v) - hurwitz_zeta2(v + 1) == pytest.approx(1 / v ** 2, rel=1e-10)


def test_domain():
    with pytest.raises(ValueError):
        hurwitz_zeta2(0.0)
    with pytest.raises(ValueError):
        digamma(-1.0)
