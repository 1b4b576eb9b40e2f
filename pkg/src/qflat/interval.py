"""Outward-rounded interval arithmetic with dyadic endpoints.

Only what the analytic cutoffs need: pi, zeta(r) and Gamma(r) at integers
r >= 2, and the field operations plus integer powers and roots on positive
intervals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, floor, ceil

from qflat.arith import bernoulli

DEFAULT_BITS = 64


def _shift(x: Fraction, bits: int) -> int:
    """Exponent s so that x * 2^s carries about ``bits`` significant bits."""
    if x == 0:
        return bits
    return bits - (abs(x.numerator).bit_length() - x.denominator.bit_length())


def _down(x: Fraction, bits: int) -> Fraction:
    s = _shift(x, bits)
    return Fraction(floor(x * Fraction(2) ** s)) / Fraction(2) ** s


def _up(x: Fraction, bits: int) -> Fraction:
    s = _shift(x, bits)
    return Fraction(ceil(x * Fraction(2) ** s)) / Fraction(2) ** s


@dataclass(frozen=True)
class RealInterval:
    lower: Fraction
    upper: Fraction
    precision_bits: int = DEFAULT_BITS

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("empty interval")

    @classmethod
    def exact(cls, x, bits: int = DEFAULT_BITS) -> "RealInterval":
        x = Fraction(x)
        return cls(_down(x, bits), _up(x, bits), bits)

    @classmethod
    def hull(cls, lo: Fraction, hi: Fraction, bits: int) -> "RealInterval":
        return cls(_down(Fraction(lo), bits), _up(Fraction(hi), bits), bits)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        return self.lower <= Fraction(x) <= self.upper

    def _coerce(self, other) -> "RealInterval":
        if isinstance(other, RealInterval):
            return other
        return RealInterval.exact(other, self.precision_bits)

    def _bits(self, other: "RealInterval") -> int:
        return max(self.precision_bits, other.precision_bits)

    def __add__(self, other):
        o = self._coerce(other)
        return RealInterval.hull(self.lower + o.lower, self.upper + o.upper, self._bits(o))

    __radd__ = __add__

    def __neg__(self):
        return RealInterval(-self.upper, -self.lower, self.precision_bits)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        products = [a * b for a in (self.lower, self.upper) for b in (o.lower, o.upper)]
        return RealInterval.hull(min(products), max(products), self._bits(o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lower <= 0 <= o.upper:
            raise ZeroDivisionError("interval contains zero")
        inv = RealInterval.hull(1 / o.upper, 1 / o.lower, o.precision_bits)
        return self * inv

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        if k == 0:
            return RealInterval.exact(1, self.precision_bits)
        ends = [self.lower**k, self.upper**k]
        lo, hi = min(ends), max(ends)
        if k % 2 == 0 and self.lower <= 0 <= self.upper:
            lo = Fraction(0)
        return RealInterval.hull(lo, hi, self.precision_bits)

    def root(self, k: int) -> "RealInterval":
        """k-th root of a nonnegative interval."""
        if self.lower < 0:
            raise ValueError("root of a negative interval")
        bits = self.precision_bits
        return RealInterval(_root_down(self.lower, k, bits), _root_up(self.upper, k, bits), bits)


def _iroot_floor(n: int, k: int) -> int:
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def _root_shift(x: Fraction, k: int, bits: int) -> int:
    return max(_shift(x, bits) // k + 1, bits) if x else bits


def _root_down(x: Fraction, k: int, bits: int) -> Fraction:
    # floor(x^(1/k) 2^s) = floor((x 2^(k s))^(1/k))
    s = _root_shift(x, k, bits)
    scaled = floor(x * Fraction(2) ** (k * s))
    return Fraction(_iroot_floor(scaled, k)) / Fraction(2) ** s


def _root_up(x: Fraction, k: int, bits: int) -> Fraction:
    s = _root_shift(x, k, bits)
    scaled = ceil(x * Fraction(2) ** (k * s))
    r = _iroot_floor(scaled, k)
    if r**k < scaled:
        r += 1
    return Fraction(r) / Fraction(2) ** s


def _arctan_inv(m: int, bits: int) -> tuple[Fraction, Fraction]:
    """Bracket arctan(1/m) by consecutive partial sums of the alternating series."""
    x = Fraction(1, m)
    tol = Fraction(1, 2 ** (bits + 8))
    total = Fraction(0)
    k = 0
    while True:
        term = x ** (2 * k + 1) / (2 * k + 1)
        nxt = total + (-1) ** k * term
        if term < tol:
            return (min(total, nxt), max(total, nxt))
        total = nxt
        k += 1


def pi_interval(bits: int = DEFAULT_BITS) -> RealInterval:
    """Machin: pi = 16 arctan(1/5) - 4 arctan(1/239)."""
    lo5, hi5 = _arctan_inv(5, bits)
    lo239, hi239 = _arctan_inv(239, bits)
    return RealInterval.hull(16 * lo5 - 4 * hi239, 16 * hi5 - 4 * lo239, bits)


def zeta_interval(r: int, bits: int = DEFAULT_BITS) -> RealInterval:
    """zeta(r) for integer r >= 2 by Euler-Maclaurin summation.

    zeta(r) = sum_{k<N} k^-r + N^(1-r)/(r-1) + N^-r/2
              + sum_{j=1}^{m} B_2j/(2j)! r(r+1)...(r+2j-2) N^(-r-2j+1) + R,
    and for the completely monotone summand |R| is at most the first omitted
    correction term; we widen by twice that.
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    n_head = max(16, r)
    tol = Fraction(1, 2 ** (bits + 4))
    head = sum((Fraction(1, k**r) for k in range(1, n_head)), Fraction(0))
    nn = Fraction(n_head)
    total = head + nn ** (1 - r) / (r - 1) + nn ** (-r) / 2
    rising = Fraction(r)  # r (r+1) ... (r+2j-2)
    j = 1
    while True:
        term = bernoulli(2 * j) / factorial(2 * j) * rising * nn ** (-r - 2 * j + 1)
        if abs(term) < tol:
            err = 2 * abs(term)
            break
        total += term
        rising *= (r + 2 * j - 1) * (r + 2 * j)
        j += 1
    return RealInterval.hull(total - err, total + err, bits)


def gamma_interval(r: int, bits: int = DEFAULT_BITS) -> RealInterval:
    """Gamma(r) = (r-1)! exactly."""
    if r < 1:
        raise ValueError("r must be positive")
    v = Fraction(factorial(r - 1))
    return RealInterval(v, v, bits)


def eval_interval(expr, bits: int = DEFAULT_BITS) -> RealInterval:
    """Evaluate a small expression tree into a certified interval.

    Nodes: ``"pi"``, ``("gamma", r)``, ``("zeta", r)``, ``("pow", e, k)``,
    ``("root", e, k)``, ``("mul", e1, e2, ...)``, ``("div", e1, e2)``,
    ``("add", e1, ...)``; ints and Fractions are exact leaves.
    """
    if isinstance(expr, RealInterval):
        return expr
    if isinstance(expr, (int, Fraction)):
        return RealInterval.exact(expr, bits)
    if expr == "pi":
        return pi_interval(bits)
    head, *args = expr
    if head == "gamma":
        return gamma_interval(args[0], bits)
    if head == "zeta":
        return zeta_interval(args[0], bits)
    if head == "pow":
        return eval_interval(args[0], bits) ** args[1]
    if head == "root":
        return eval_interval(args[0], bits).root(args[1])
    if head == "mul":
        out = RealInterval.exact(1, bits)
        for a in args:
            out = out * eval_interval(a, bits)
        return out
    if head == "add":
        out = RealInterval.exact(0, bits)
        for a in args:
            out = out + eval_interval(a, bits)
        return out
    if head == "div":
        return eval_interval(args[0], bits) / eval_interval(args[1], bits)
    raise ValueError(f"unknown node {head!r}")
