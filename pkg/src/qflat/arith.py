"""Exact special values: Bernoulli numbers, zeta at negative odd integers,
and L-values of quadratic Dirichlet characters at non-positive integers.

Everything here returns :class:`fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from sympy import factorint


@lru_cache(maxsize=None)
def bernoulli(k: int) -> Fraction:
    """B_k with the x/(e^x - 1) convention, so B_1 = -1/2."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return Fraction(1)
    if k > 1 and k % 2:
        return Fraction(0)
    # sum_{j<=k} C(k+1, j) B_j = 0
    acc = sum((comb(k + 1, j) * bernoulli(j) for j in range(k)), Fraction(0))
    return -acc / (k + 1)


def zeta_special(k: int) -> Fraction:
    """zeta(1 - 2k) = -B_{2k} / 2k."""
    if k < 1:
        raise ValueError("k must be positive")
    return -bernoulli(2 * k) / (2 * k)


@lru_cache(maxsize=None)
def zeta_product(m: int) -> Fraction:
    """prod_{k=1}^{m} |zeta(1 - 2k)|; the empty product is 1."""
    out = Fraction(1)
    for k in range(1, m + 1):
        out *= abs(zeta_special(k))
    return out


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental_discriminant(d: int) -> bool:
    if d == 1:
        return True
    if d == 0:
        return False
    if d % 4 == 1:
        return all(e == 1 for e in factorint(abs(d)).values())
    if d % 4 == 0:
        m = d // 4
        if m % 4 not in (2, 3):
            return False
        return all(e == 1 for p, e in factorint(abs(m)).items() if p != 2)
    return False


def fundamental_discriminant(t: int) -> int:
    """Discriminant of Q(sqrt(t)) for a nonzero integer t (1 if t is a square)."""
    if t == 0:
        raise ValueError("t must be nonzero")
    core = 1 if t > 0 else -1
    for p, e in factorint(abs(t)).items():
        if e % 2:
            core *= p
    if core == 1:
        return 1
    return core if core % 4 == 1 else 4 * core


@dataclass(frozen=True)
class QuadraticCharacter:
    """The primitive quadratic character m -> (D/m) of a fundamental discriminant D.

    D = 1 gives the trivial character.
    """

    fundamental_discriminant: int

    def __post_init__(self):
        if not is_fundamental_discriminant(self.fundamental_discriminant):
            raise ValueError(f"{self.fundamental_discriminant} is not a fundamental discriminant")

    @property
    def conductor(self) -> int:
        return abs(self.fundamental_discriminant)

    @property
    def parity(self) -> int:
        """chi(-1)."""
        return 1 if self.fundamental_discriminant > 0 else -1

    @property
    def is_trivial(self) -> bool:
        return self.fundamental_discriminant == 1

    @property
    def ramified_primes(self) -> list[int]:
        return sorted(factorint(self.conductor))

    def __call__(self, m: int) -> int:
        return kronecker(self.fundamental_discriminant, m)


def _char_power_sum(chi: QuadraticCharacter, m: int) -> int:
    q = chi.conductor
    return sum(chi(a) * a**m for a in range(1, q + 1))


@lru_cache(maxsize=None)
def _generalized_bernoulli(k: int, d: int) -> Fraction:
    chi = QuadraticCharacter(d)
    if chi.is_trivial:
        return Fraction(1, 2) if k == 1 else bernoulli(k)
    q = chi.conductor
    # q^{k-1} sum_a chi(a) B_k(a/q), expanded in power sums of chi
    total = Fraction(0)
    for j in range(k + 1):
        bj = bernoulli(j)
        if bj:
            total += comb(k, j) * bj * Fraction(q) ** (j - 1) * _char_power_sum(chi, k - j)
    return total


def generalized_bernoulli(k: int, chi: QuadraticCharacter) -> Fraction:
    """B_{k,chi} = q^{k-1} sum_{a=1}^{q} chi(a) B_k(a/q)."""
    if k < 1:
        raise ValueError("k must be positive")
    return _generalized_bernoulli(k, chi.fundamental_discriminant)


def dirichlet_L_special(k: int, chi: QuadraticCharacter) -> Fraction:
    """L(1 - k, chi) = -B_{k,chi}/k.

    Raises ValueError when chi(-1) != (-1)^k, where the value is a trivial zero.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if chi.parity != (-1) ** k:
        raise ValueError(f"parity mismatch: chi(-1) = {chi.parity} but k = {k}")
    return -generalized_bernoulli(k, chi) / k
