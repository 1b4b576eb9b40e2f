"""Rational quadratic spaces: global invariant profiles, the product formula,
and construction of a diagonal space from prescribed local data."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from sympy import factorint

from qflat.local import (
    REAL,
    GHYLocalData,
    LocalStdInvariants,
    ghy_from_std,
    hilbert_symbol,
    squareclass_of,
    std_from_ghy,
    std_invariants_of_diagonal,
)

ASSEMBLE_SEARCH_CAP = 10**4


def squarefree_part(t) -> int:
    """Signed squarefree integer in the squareclass of the nonzero rational t."""
    t = Fraction(t)
    if t == 0:
        raise ValueError("zero has no squarefree part")
    out = 1 if t > 0 else -1
    for m in (t.numerator, t.denominator):
        for p, e in factorint(abs(m)).items():
            if e % 2:
                out *= p
    return out


def prime_support(*values) -> set[int]:
    """Primes dividing the numerator or denominator of any of the values."""
    out = set()
    for t in values:
        t = Fraction(t)
        out.update(factorint(abs(t.numerator)))
        out.update(factorint(t.denominator))
    return out


@dataclass(frozen=True)
class RationalSpace:
    diagonal: tuple

    def __post_init__(self):
        diag = tuple(Fraction(a) for a in self.diagonal)
        if not diag or any(a == 0 for a in diag):
            raise ValueError("diagonal entries must be nonzero")
        object.__setattr__(self, "diagonal", diag)

    @property
    def n(self) -> int:
        return len(self.diagonal)

    @property
    def is_positive_definite(self) -> bool:
        return all(a > 0 for a in self.diagonal)

    @property
    def determinant(self) -> Fraction:
        return prod(self.diagonal, start=Fraction(1))


def _minus_one_pow(k: int) -> int:
    return -1 if k % 2 else 1


@dataclass(frozen=True)
class GlobalProfile:
    """Local (delta_p, w_p) data of a positive definite space.

    ``Delta`` is the squarefree determinant, so delta_p is the class of
    (-1)^floor(n/2) Delta. ``local`` holds entries exactly at the primes
    dividing 2 Delta and at primes with w_p = -1, sorted by prime.
    """

    n: int
    Delta: int
    local: tuple
    definite: bool = True

    def __post_init__(self):
        if self.Delta <= 0 or squarefree_part(self.Delta) != self.Delta:
            raise ValueError("Delta must be a positive squarefree integer")
        primes = [e.p for e in self.local]
        if primes != sorted(set(primes)):
            raise ValueError("local entries must be sorted by distinct primes")
        need = {2} | set(factorint(self.Delta))
        for e in self.local:
            if e.n != self.n:
                raise ValueError("rank mismatch in local data")
            if e.delta != self.delta_at(e.p):
                raise ValueError(f"delta at {e.p} is incoherent with Delta = {self.Delta}")
            if e.p not in need and e.w == 1:
                raise ValueError(f"redundant generic entry at {e.p}")
        if not need <= set(primes):
            raise ValueError("missing local entries at primes dividing 2 Delta")

    @classmethod
    def build(cls, n: int, Delta: int, w_map: dict) -> "GlobalProfile":
        """Canonical profile from Delta and the w_p values (others default to +1)."""
        primes = {2} | set(factorint(Delta)) | {p for p, w in w_map.items() if w == -1}
        sign = _minus_one_pow(n // 2)
        local = tuple(
            GHYLocalData(p, n, squareclass_of(sign * Delta, p), w_map.get(p, 1))
            for p in sorted(primes)
        )
        return cls(n, Delta, local)

    def delta_at(self, p: int):
        return squareclass_of(_minus_one_pow(self.n // 2) * self.Delta, p)

    def entry(self, p: int) -> GHYLocalData:
        for e in self.local:
            if e.p == p:
                return e
        return GHYLocalData(p, self.n, self.delta_at(p), 1)

    def w(self, p: int) -> int:
        return self.entry(p).w

    @property
    def primes(self) -> list[int]:
        return [e.p for e in self.local]

    @property
    def w_map(self) -> dict:
        return {e.p: e.w for e in self.local}

    def std_at(self, p: int) -> LocalStdInvariants:
        return std_from_ghy(self.entry(p))

    def summary(self) -> dict:
        return {
            "n": self.n,
            "Delta": self.Delta,
            "local": {str(e.p): {"w": e.w, "mass_type": e.mass_type.value} for e in self.local},
        }


def profile_of_space(s: RationalSpace) -> GlobalProfile:
    if not s.is_positive_definite:
        raise ValueError("space is not positive definite")
    n = s.n
    Delta = squarefree_part(s.determinant)
    w_map = {}
    for p in sorted({2} | prime_support(*s.diagonal)):
        w_map[p] = ghy_from_std(std_invariants_of_diagonal(s.diagonal, p)).w
    return GlobalProfile.build(n, Delta, w_map)


def check_product_formula(prof: GlobalProfile) -> bool:
    """prod_p w_p = (-1)^floor(n/4) prod_p (-1, delta_p)_p^floor((n-1)/2)."""
    n = prof.n
    lhs = prod(e.w for e in prof.local)
    rhs = _minus_one_pow(n // 4)
    if (n - 1) // 2 % 2:
        for p in prof.primes:
            rhs *= hilbert_symbol(-1, prof.delta_at(p), p)
    return lhs == rhs


def _squarefree_ints(limit: int):
    for a in range(1, limit + 1):
        if all(e == 1 for e in factorint(a).values()):
            yield a


def _binary_realizable(d: int, c: dict, primes) -> bool:
    """Whether a positive binary space with determinant d and Hasse data c exists."""
    for p in primes:
        if c.get(p, 1) == -1 and squareclass_of(-d, p).is_square:
            return False
    return True


def assemble_space(prof: GlobalProfile, cap: int = ASSEMBLE_SEARCH_CAP) -> RationalSpace:
    """Positive definite diagonal space with the given profile.

    Entries are peeled off one at a time: ones while the residual has
    dimension at least 4, then a ternary step choosing the least squarefree
    a leaving a realizable binary residual, then the binary step.
    """
    n = prof.n
    if n < 3:
        raise ValueError("assembly is only supported for n >= 3")
    if not check_product_formula(prof):
        raise ValueError("profile violates the product formula; no such space exists")
    d = prof.Delta
    c = {p: prof.std_at(p).c for p in prof.primes}
    diag = [1] * (n - 3)

    # ternary residual (3, d, c): choose a, residual binary (2, d a, c_p (a, d a)_p)
    for a in _squarefree_ints(cap):
        d2 = squarefree_part(d * a)
        primes = sorted(set(c) | prime_support(a, d2) | {2})
        c2 = {p: c.get(p, 1) * hilbert_symbol(a, d2, p) for p in primes}
        if _binary_realizable(d2, c2, primes):
            break
    else:
        raise RuntimeError(f"ternary step found no entry below {cap} for {prof}")

    # binary residual (2, d2, c2): <b, b d2> has Hasse invariant (b, -d2)_p
    for b in _squarefree_ints(cap):
        primes = sorted(set(c2) | prime_support(b, d2) | {2})
        if all(hilbert_symbol(b, -d2, p) == c2.get(p, 1) for p in primes):
            break
    else:
        raise RuntimeError(f"binary step found no entry below {cap} for {prof}")

    diag += [a, b, squarefree_part(d2 * b)]
    space = RationalSpace(tuple(diag))
    if profile_of_space(space) != prof:
        raise RuntimeError(f"assembled space {diag} does not realize {prof}")
    return space


def spaces_equivalent(a: RationalSpace, b: RationalSpace) -> bool:
    if a.n != b.n:
        return False
    if squarefree_part(a.determinant) != squarefree_part(b.determinant):
        return False
    if sum(x > 0 for x in a.diagonal) != sum(x > 0 for x in b.diagonal):
        return False
    for p in sorted({2} | prime_support(*a.diagonal, *b.diagonal)):
        if std_invariants_of_diagonal(a.diagonal, p).c != std_invariants_of_diagonal(b.diagonal, p).c:
            return False
    return True
