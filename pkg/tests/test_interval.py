from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from qflat.interval import RealInterval, eval_interval, gamma_interval, pi_interval, zeta_interval

mpmath.mp.dps = 60


def _contains(iv, x):
    lo = mpmath.mpf(iv.lower.numerator) / iv.lower.denominator
    hi = mpmath.mpf(iv.upper.numerator) / iv.upper.denominator
    return lo <= x <= hi


def test_gamma_exact():
    g = gamma_interval(4)
    assert g.lower == g.upper == 6
    assert g.width == 0


def test_zeta2():
    z = eval_interval(("zeta", 2))
    assert _contains(z, mpmath.pi**2 / 6)
    assert z.width <= Fraction(1, 2**30)


def test_pi_squared():
    iv = eval_interval(("pow", "pi", 2))
    assert _contains(iv, mpmath.pi**2)
    assert iv.width <= Fraction(1, 2**30)


@pytest.mark.parametrize("r", [2, 3, 4, 7, 10, 25, 60])
def test_zeta_contains_true_value(r):
    assert _contains(zeta_interval(r), mpmath.zeta(r))


@pytest.mark.parametrize("bits", [32, 64, 128])
def test_pi_bits(bits):
    iv = pi_interval(bits)
    assert _contains(iv, mpmath.pi)
    assert iv.width < Fraction(1, 2 ** (bits - 4))


def test_roots_and_division():
    s = eval_interval(("root", 2, 2))
    assert _contains(s, mpmath.sqrt(2))
    q = eval_interval(("div", 1, 3))
    assert q.contains(Fraction(1, 3))
    with pytest.raises(ValueError):
        eval_interval(("nope", 1))


@given(st.fractions(min_value=-100, max_value=100), st.fractions(min_value=Fraction(1, 100), max_value=100))
def test_arithmetic_encloses(a, b):
    A, B = RealInterval.exact(a), RealInterval.exact(b)
    assert (A + B).contains(a + b)
    assert (A - B).contains(a - b)
    assert (A * B).contains(a * b)
    assert (A / B).contains(a / b)
    assert (B ** 3).contains(b**3)
