from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from qflat.arith import (
    QuadraticCharacter,
    bernoulli,
    dirichlet_L_special,
    fundamental_discriminant,
    generalized_bernoulli,
    is_fundamental_discriminant,
    kronecker,
    zeta_product,
    zeta_special,
)


def test_bernoulli_small():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(7) == 0


def test_bernoulli_matches_mpmath():
    with mpmath.workdps(50):
        for k in [0] + list(range(2, 40)):
            b = bernoulli(k)
            assert abs(mpmath.bernoulli(k) - mpmath.mpf(b.numerator) / b.denominator) <= 1e-30 * (1 + abs(b))


def test_zeta_special_values():
    assert zeta_special(1) == Fraction(-1, 12)
    assert zeta_special(2) == Fraction(1, 120)
    assert zeta_special(3) == Fraction(-1, 252)
    assert zeta_product(2) == Fraction(1, 1440)
    with pytest.raises(ValueError):
        zeta_special(0)


@pytest.mark.parametrize("k", range(1, 12))
def test_zeta_sign_alternates(k):
    assert (zeta_special(k) > 0) == (k % 2 == 0)


def test_kronecker_against_sympy_jacobi():
    from sympy import jacobi_symbol

    for a in range(-30, 31):
        for n in range(1, 60, 2):
            assert kronecker(a, n) == jacobi_symbol(a, n)


def test_fundamental_discriminants():
    good = [-3, -4, 5, -7, 8, -8, 12, 13, -15, -20, 21, -24, 24, 28]
    bad = [0, 2, 3, -1, 4, 9, 16, -12 * 4, 18]
    assert all(is_fundamental_discriminant(d) for d in good)
    assert not any(is_fundamental_discriminant(d) for d in bad)
    assert is_fundamental_discriminant(1)  # the trivial character
    assert fundamental_discriminant(-1) == -4
    assert fundamental_discriminant(2) == 8
    assert fundamental_discriminant(5 * 9) == 5
    assert fundamental_discriminant(7) == 28


def test_character_basics():
    chi = QuadraticCharacter(-4)
    assert chi.conductor == 4 and chi.parity == -1
    assert [chi(m) for m in range(1, 6)] == [1, 0, -1, 0, 1]
    assert QuadraticCharacter(1).is_trivial
    assert QuadraticCharacter(-15).ramified_primes == [3, 5]
    with pytest.raises(ValueError):
        QuadraticCharacter(-1)


def test_generalized_bernoulli_examples():
    assert generalized_bernoulli(1, QuadraticCharacter(-3)) == Fraction(-1, 3)
    assert generalized_bernoulli(1, QuadraticCharacter(-4)) == Fraction(-1, 2)
    # wrong parity: the summand is antisymmetric, so the value vanishes
    assert generalized_bernoulli(2, QuadraticCharacter(-4)) == 0
    assert generalized_bernoulli(2, QuadraticCharacter(1)) == bernoulli(2)


def test_L_values():
    assert dirichlet_L_special(1, QuadraticCharacter(-3)) == Fraction(1, 3)
    assert dirichlet_L_special(1, QuadraticCharacter(-4)) == Fraction(1, 2)
    assert dirichlet_L_special(2, QuadraticCharacter(1)) == zeta_special(1)
    with pytest.raises(ValueError):
        dirichlet_L_special(2, QuadraticCharacter(-4))


def _mp_L(s, D):
    chi = QuadraticCharacter(D)
    return mpmath.dirichlet(s, [chi(a) for a in range(D if D > 0 else -D)])


@pytest.mark.parametrize("k,D", [(3, -4), (1, -3), (2, 5), (2, 8), (3, -7), (4, 13), (5, -8), (2, 12)])
def test_L_values_against_numeric_continuation(k, D):
    mpmath.mp.dps = 40
    val = dirichlet_L_special(k, QuadraticCharacter(D))
    assert abs(_mp_L(1 - k, D) - mpmath.mpf(val.numerator) / val.denominator) < mpmath.mpf(2) ** -30


@given(st.integers(1, 8), st.sampled_from([-3, -4, 5, -7, 8, -8, 12, 13, -15, 17, -20, 21]))
def test_bernoulli_parity_vanishing(k, D):
    chi = QuadraticCharacter(D)
    b = generalized_bernoulli(k, chi)
    if chi.parity != (-1) ** k:
        assert b == 0
    else:
        assert b != 0
        assert k * abs(dirichlet_L_special(k, chi)) == abs(b)
