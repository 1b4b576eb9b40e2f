"""Local quadratic-space invariants over Q_p and R.

Places are plain ints: a prime p, or ``REAL`` (= 0) for the archimedean place.
Squareclasses are stored in canonical form so that equality is structural.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from qflat.arith import kronecker

REAL = 0


def _as_int_class(t) -> int:
    """Integer in the same squareclass as the nonzero rational t (num * den)."""
    t = Fraction(t)
    if t == 0:
        raise ValueError("zero has no squareclass")
    return t.numerator * t.denominator


def valuation(t: int, p: int) -> tuple[int, int]:
    """(ord_p(t), t / p^ord) for a nonzero integer t."""
    if t == 0:
        raise ValueError("valuation of zero")
    if p < 2:
        raise ValueError(f"{p} is not a prime")
    v = 0
    while t % p == 0:
        t //= p
        v += 1
    return v, t


@lru_cache(maxsize=None)
def least_nonresidue(p: int) -> int:
    for a in range(2, p):
        if kronecker(a, p) == -1:
            return a
    raise ValueError(f"no nonresidue mod {p}")


@dataclass(frozen=True, order=True)
class SquareClass:
    """Canonical element of Q_v^x / (Q_v^x)^2.

    unit: 1 or the least nonresidue (odd p); 1, 3, 5, 7 (p = 2); +-1 (real).
    """

    p: int
    unit: int
    val: int = 0

    @property
    def rep(self) -> int:
        if self.p == REAL:
            return self.unit
        return self.unit * self.p**self.val

    @property
    def is_square(self) -> bool:
        return self.unit == 1 and self.val == 0

    def __mul__(self, other) -> "SquareClass":
        if isinstance(other, SquareClass):
            if other.p != self.p:
                raise ValueError("squareclasses at different places")
            other = other.rep
        return squareclass_of(self.rep * _as_int_class(other), self.p)

    __rmul__ = __mul__

    def __repr__(self):
        if self.p == REAL:
            return f"SquareClass(R, {self.unit:+d})"
        return f"SquareClass(p={self.p}, unit={self.unit}, val={self.val})"


def squareclass_of(t, p: int) -> SquareClass:
    t = _as_int_class(t)
    if p == REAL:
        return SquareClass(REAL, 1 if t > 0 else -1, 0)
    v, u = valuation(t, p)
    if p == 2:
        return SquareClass(2, u % 8, v % 2)
    unit = 1 if kronecker(u, p) == 1 else least_nonresidue(p)
    return SquareClass(p, unit, v % 2)


def all_squareclasses(p: int) -> list[SquareClass]:
    if p == REAL:
        return [SquareClass(REAL, 1), SquareClass(REAL, -1)]
    units = [1, 3, 5, 7] if p == 2 else [1, least_nonresidue(p)]
    return [SquareClass(p, u, v) for v in (0, 1) for u in units]


def hilbert_symbol(a, b, p: int) -> int:
    """(a, b)_p in {+1, -1}; accepts rationals or SquareClasses."""
    a = a.rep if isinstance(a, SquareClass) else _as_int_class(a)
    b = b.rep if isinstance(b, SquareClass) else _as_int_class(b)
    if p == REAL:
        return -1 if a < 0 and b < 0 else 1
    alpha, u = valuation(a, p)
    beta, v = valuation(b, p)
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omega = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    s = 1
    if alpha * beta * ((p - 1) // 2) % 2:
        s = -s
    if beta % 2:
        s *= kronecker(u, p)
    if alpha % 2:
        s *= kronecker(v, p)
    return s


def is_ramified_quadratic_ext(delta: SquareClass) -> bool:
    """Whether Q_p(sqrt(delta)) / Q_p is ramified (False for square delta)."""
    if delta.p == REAL:
        raise ValueError("finite places only")
    if delta.is_square:
        return False
    if delta.val:
        return True
    return delta.p == 2 and delta.unit in (3, 7)


@dataclass(frozen=True)
class LocalStdInvariants:
    """Dimension, determinant squareclass and Hasse invariant at one place."""

    p: int
    n: int
    d: SquareClass
    c: int


def std_invariants_of_diagonal(coeffs, p: int) -> LocalStdInvariants:
    coeffs = [Fraction(a) for a in coeffs]
    if not coeffs:
        raise ValueError("empty form")
    det = Fraction(1)
    for a in coeffs:
        det *= a
    c = 1
    for a, b in combinations(coeffs, 2):
        c *= hilbert_symbol(a, b, p)
    return LocalStdInvariants(p, len(coeffs), squareclass_of(det, p), c)


def direct_sum_invariants(a: LocalStdInvariants, b: LocalStdInvariants) -> LocalStdInvariants:
    if a.p != b.p:
        raise ValueError("invariants at different places")
    return LocalStdInvariants(a.p, a.n + b.n, a.d * b.d, a.c * b.c * hilbert_symbol(a.d, b.d, a.p))


def _minus_one_pow(k: int, p: int) -> SquareClass:
    return squareclass_of(-1 if k % 2 else 1, p)


def anisotropic_dimension(inv: LocalStdInvariants) -> int:
    """Dimension of the anisotropic kernel at a finite place."""
    p, n, d, c = inv.p, inv.n, inv.d, inv.c
    if p == REAL:
        raise ValueError("finite places only")
    while n >= 5:
        # V = H + V', with d' = -d and c' = c (-1, -d)
        minus_d = d * -1
        c = c * hilbert_symbol(-1, minus_d, p)
        d = minus_d
        n -= 2
    minus_d = d * -1
    if n == 4:
        if not d.is_square:
            return 2
        return 0 if c == hilbert_symbol(-1, -1, p) else 4
    if n == 3:
        return 1 if c == hilbert_symbol(-1, minus_d, p) else 3
    if n == 2:
        if minus_d.is_square:
            # only the hyperbolic plane has d = -1
            return 0
        return 2
    if n == 1:
        return 1
    return 0


class MassType(enum.Enum):
    Generic = "Generic"
    OddI = "OddI"
    OddIIplus = "OddIIplus"
    OddIIminus = "OddIIminus"
    EvenI = "EvenI"
    EvenII = "EvenII"
    EvenIII = "EvenIII"

    def __repr__(self):
        return self.value


ODD_TYPES = (MassType.OddI, MassType.OddIIplus, MassType.OddIIminus)
EVEN_TYPES = (MassType.EvenI, MassType.EvenII, MassType.EvenIII)


def mass_type(n: int, delta: SquareClass, w: int) -> MassType:
    """Cell of the local mass-factor table selected by (n, delta, w).

    Even n is routed by the quadratic algebra Q_p(sqrt(delta)): split,
    unramified or ramified.
    """
    if n % 2:
        if delta.val % 2 == 0:
            return MassType.Generic if w == 1 else MassType.OddI
        return MassType.OddIIplus if w == 1 else MassType.OddIIminus
    if delta.is_square:
        return MassType.Generic if w == 1 else MassType.EvenI
    if is_ramified_quadratic_ext(delta):
        return MassType.EvenIII
    return MassType.Generic if w == 1 else MassType.EvenII


@dataclass(frozen=True, order=True)
class GHYLocalData:
    """The (delta, w) local parameters at a finite prime."""

    p: int
    n: int
    delta: SquareClass
    w: int

    @property
    def mass_type(self) -> MassType:
        return mass_type(self.n, self.delta, self.w)


def ghy_from_std(inv: LocalStdInvariants) -> GHYLocalData:
    p, n = inv.p, inv.n
    r = n // 2
    delta = inv.d * (-1 if r % 2 else 1)
    aniso = anisotropic_dimension(inv)
    if n % 2:
        w = 1 if aniso == 1 else -1
    elif aniso == 0:
        w = 1
    elif aniso == 4:
        w = -1
    else:
        # c = (-1,-1)^floor((r-1)/2) * w * ((-1)^(r-1), -delta)
        w = (
            inv.c
            * hilbert_symbol(-1, -1, p) ** ((r - 1) // 2)
            * hilbert_symbol(_minus_one_pow(r - 1, p), delta * -1, p)
        )
    return GHYLocalData(p, n, delta, w)


def std_from_ghy(data: GHYLocalData) -> LocalStdInvariants:
    p, n, delta, w = data.p, data.n, data.delta, data.w
    if w not in (1, -1):
        raise ValueError("w must be +-1")
    r = n // 2
    if n % 2 and w == -1 and n < 3:
        raise ValueError("w = -1 needs dimension >= 3 in odd rank")
    if n % 2 == 0 and delta.is_square and w == -1 and n < 4:
        raise ValueError("anisotropic kernel of dimension 4 needs n >= 4")
    d = delta * _minus_one_pow(r, p)
    # closed form of every table row: c = w (-1,-1)^floor(r/2) (-1, delta)^e,
    # with e = [r odd] for odd n and e = [r even] for even n
    e = (r % 2) if n % 2 else (1 - r % 2)
    c = w * hilbert_symbol(-1, -1, p) ** (r // 2) * hilbert_symbol(-1, delta, p) ** e
    return LocalStdInvariants(p, n, d, c)
