"""Exact proper masses of maximal lattices and the eligibility bounds used to
enumerate every genus with small mass.

Mass+ = 2^((3-n)/2) prod_{k<=(n-1)/2} |zeta(1-2k)| prod_p lambda_p        (n odd)
Mass+ = 2^((2-n)/2) |L(1-n/2, chi)| prod_{k<=(n-2)/2} |zeta(1-2k)| prod_p lambda_p   (n even)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import floor

from sympy import factorint, nextprime, primerange

from qflat.arith import (
    QuadraticCharacter,
    dirichlet_L_special,
    fundamental_discriminant,
    zeta_product,
    zeta_special,
)
from qflat.interval import DEFAULT_BITS, RealInterval, eval_interval
from qflat.local import EVEN_TYPES, ODD_TYPES, MassType
from qflat.space import GlobalProfile, check_product_formula

__all__ = [
    "MassType",
    "EligibleTuple",
    "GenusMassStatement",
    "lambda_factor",
    "rank_prefactor",
    "mass_from_profile",
    "character_of_profile",
    "prime_power_cutoff",
    "divisor_condition_holds",
    "twist_bound_rhs",
    "enumerate_characters",
    "bound_Bpp",
    "enumerate_tuples",
    "profiles_from_tuple",
    "min_mass_lower_bound",
    "minkowski_bound",
    "unit_mass_possible",
    "scan_horizon",
]


def _pow2(e) -> Fraction:
    return Fraction(2) ** e


def lambda_factor(p: int, n: int, t: MassType) -> Fraction:
    if t is MassType.Generic:
        return Fraction(1)
    if n % 2:
        if t not in ODD_TYPES:
            raise ValueError(f"{t} is not an odd-rank mass type")
        if t is MassType.OddI:
            return Fraction(p ** (n - 1) - 1, 2 * (p + 1))
        w = 1 if t is MassType.OddIIplus else -1
        return Fraction(p ** ((n - 1) // 2) + w, 2)
    if t not in EVEN_TYPES:
        raise ValueError(f"{t} is not an even-rank mass type")
    if t is MassType.EvenIII:
        return Fraction(1, 2)
    a, b = p ** ((n - 2) // 2), p ** (n // 2)
    if t is MassType.EvenI:
        return Fraction((a - 1) * (b - 1), 2 * (p + 1))
    return Fraction((a + 1) * (b + 1), 2 * (p + 1))


def rank_prefactor(n: int) -> Fraction:
    """The part of Mass+ depending only on n (without the L-value for even n)."""
    if n % 2:
        return _pow2((3 - n) // 2) * zeta_product((n - 1) // 2)
    return _pow2((2 - n) // 2) * zeta_product((n - 2) // 2)


def character_of_profile(prof: GlobalProfile) -> QuadraticCharacter:
    """Character of Q(sqrt(delta)), delta = (-1)^(n/2) Delta."""
    if prof.n % 2:
        raise ValueError("only even rank carries a character")
    sign = -1 if (prof.n // 2) % 2 else 1
    return QuadraticCharacter(fundamental_discriminant(sign * prof.Delta))


def L_factor(n: int, chi: QuadraticCharacter) -> Fraction:
    """|L(1 - n/2, chi)|."""
    return abs(dirichlet_L_special(n // 2, chi))


@dataclass(frozen=True)
class GenusMassStatement:
    profile: GlobalProfile
    character: QuadraticCharacter | None
    proper_mass: Fraction


def mass_from_profile(prof: GlobalProfile, chi: QuadraticCharacter | None = None) -> GenusMassStatement:
    n = prof.n
    if n < 3:
        raise ValueError("mass formula needs n >= 3")
    lam = Fraction(1)
    for e in prof.local:
        lam *= lambda_factor(e.p, n, e.mass_type)
    if n % 2:
        if chi is not None:
            raise ValueError("odd rank takes no character")
        return GenusMassStatement(prof, None, rank_prefactor(n) * lam)
    own = character_of_profile(prof)
    if chi is not None and chi != own:
        raise ValueError(f"character {chi} is incoherent with the profile (expected {own})")
    return GenusMassStatement(prof, own, rank_prefactor(n) * L_factor(n, own) * lam)


# ---------------------------------------------------------------- twist bounds


@lru_cache(maxsize=None)
def _twist_constant(K: Fraction, r: int, bits: int) -> RealInterval:
    """K (2 pi)^r zeta(r) / (Gamma(r) zeta(2r))."""
    expr = (
        "div",
        ("mul", K, ("pow", ("mul", 2, "pi"), r), ("zeta", r)),
        ("mul", ("gamma", r), ("zeta", 2 * r)),
    )
    return eval_interval(expr, bits)


def prime_power_cutoff(K, r: int, bits: int = DEFAULT_BITS) -> int:
    """Every prime power above the returned N forces |L(1-r, chi)|/2^t > K."""
    if r < 2:
        raise ValueError("r must be >= 2")
    x = _twist_constant(Fraction(K), r, bits)
    return floor((x**2).root(2 * r - 1).upper)


def divisor_condition_holds(q: int, K, r: int, bits: int = DEFAULT_BITS) -> bool:
    """Certifiably true iff some divisor q' of q satisfies

    prod_{p | q'} p^(ord_p(q')(r - 1/2)) / 2 > K (2 pi)^r zeta(r) / (2 Gamma(r) zeta(2r)).

    The left side only grows along divisibility, so q' = q is decisive.
    """
    if q <= 1:
        return False
    t = len(factorint(q))
    rhs = _twist_constant(Fraction(K), r, bits) * Fraction(1, 2)
    # sqrt(q^(2r-1)) / 2^t > rhs  <=>  q^(2r-1) > (rhs 2^t)^2
    return q ** (2 * r - 1) > ((rhs * 2**t) ** 2).upper


def twist_bound_rhs(n: int, B) -> Fraction:
    if n % 2 or n < 4:
        raise ValueError("n must be even and >= 4")
    extra = 2 if n == 4 else 1
    return Fraction(B) * _pow2((n - 2) // 2) / zeta_product((n - 2) // 2) * extra


def _discriminant_components(limit: int) -> list:
    """Prime discriminants p* with |p*| <= limit, plus -4, 8, -8."""
    comps = [-4, 8, -8] if limit >= 4 else []
    comps = [c for c in comps if abs(c) <= limit]
    for p in primerange(3, limit + 1):
        comps.append(p if p % 4 == 1 else -p)
    return sorted(comps, key=lambda c: (abs(c), c))


def enumerate_characters(n: int, B, bits: int = DEFAULT_BITS) -> list:
    """Quadratic characters chi with chi(-1) = (-1)^(n/2) and |L(1-n/2, chi)|/2^t <= K.

    The trivial character is included when n = 0 mod 4 and passes the test.
    """
    if n % 2 or n < 4:
        raise ValueError("n must be even and >= 4")
    r = n // 2
    K = twist_bound_rhs(n, B)
    cutoff = prime_power_cutoff(K, r, bits)
    comps = _discriminant_components(cutoff)
    found = []

    def test(D):
        chi = QuadraticCharacter(D)
        if chi.parity != (-1) ** r:
            return
        if L_factor(n, chi) / 2 ** len(chi.ramified_primes) <= K:
            found.append(chi)

    def dfs(start, D, has_two):
        for i in range(start, len(comps)):
            c = comps[i]
            if c % 2 == 0 and has_two:
                continue
            D2 = D * c
            if divisor_condition_holds(abs(D2), K, r, bits):
                if c % 2:
                    break  # larger components fail too
                continue
            test(D2)
            dfs(i + 1, D2, has_two or c % 2 == 0)

    if r % 2 == 0 and L_factor(n, QuadraticCharacter(1)) <= K:
        found.append(QuadraticCharacter(1))
    dfs(0, 1, False)
    return sorted(found, key=lambda c: (c.conductor, c.fundamental_discriminant))


def bound_Bpp(n: int, chi: QuadraticCharacter | None, B) -> tuple[Fraction, Fraction]:
    """(B'', epsilon): B'' bounds the product of all lambda_p, scaled by B."""
    B = Fraction(B)
    eps = Fraction(2) if n <= 4 else Fraction(1)
    if n % 2:
        if chi is not None:
            raise ValueError("odd rank takes no character")
        return B * _pow2((n - 3) // 2) / zeta_product((n - 1) // 2), eps
    if chi is None:
        raise ValueError("even rank needs a character")
    return B * _pow2((n - 2) // 2) / (L_factor(n, chi) * zeta_product((n - 2) // 2)), eps


@dataclass(frozen=True)
class EligibleTuple:
    n: int
    character: QuadraticCharacter | None
    assignments: tuple  # sorted (p, MassType) pairs, Generic omitted
    bound_B: Fraction = field(default=Fraction(1))

    @property
    def lambda_product(self) -> Fraction:
        out = Fraction(1)
        for p, t in self.assignments:
            out *= lambda_factor(p, self.n, t)
        return out

    @property
    def proper_mass(self) -> Fraction:
        m = rank_prefactor(self.n) * self.lambda_product
        if self.n % 2 == 0:
            m *= L_factor(self.n, self.character)
        return m


def _min_nongeneric(p: int, n: int) -> Fraction:
    """Smallest non-generic factor available at p, ignoring EvenIII."""
    if n % 2:
        return min(lambda_factor(p, n, MassType.OddI), lambda_factor(p, n, MassType.OddIIminus))
    return lambda_factor(p, n, MassType.EvenI)


def _options(p: int, n: int, chi: QuadraticCharacter | None) -> list:
    if n % 2:
        return [MassType.OddI, MassType.OddIIplus, MassType.OddIIminus]
    s = chi(p)
    if s == 1:
        return [MassType.EvenI]
    if s == -1:
        return [MassType.EvenII]
    return []


def enumerate_tuples(n: int, B, chi: QuadraticCharacter | None = None) -> list:
    """All mass-type assignments whose proper mass is at most B.

    For even n the conductor primes carry EvenIII; the remaining primes are
    explored in increasing order. Past p = 2 every non-generic factor is at
    least 1 and the smallest one grows with p, so the search along a branch
    stops at the first prime whose smallest factor exceeds the budget left.
    """
    B = Fraction(B)
    if (n % 2 == 0) != (chi is not None):
        raise ValueError("character required exactly for even n")
    base = rank_prefactor(n)
    fixed = []
    if chi is not None:
        base *= L_factor(n, chi)
        for p in chi.ramified_primes:
            fixed.append((p, MassType.EvenIII))
            base /= 2
    skip = {p for p, _ in fixed}
    budget = B / base
    out = []

    def dfs(p, prod_, chosen):
        if prod_ <= budget:
            out.append(tuple(sorted(fixed + chosen)))
        q = p
        while True:
            if q not in skip:
                if q > 2 and prod_ * _min_nongeneric(q, n) > budget:
                    return
                for t in _options(q, n, chi):
                    lam = lambda_factor(q, n, t)
                    if prod_ * lam <= budget:
                        dfs(nextprime(q), prod_ * lam, chosen + [(q, t)])
            q = nextprime(q)

    dfs(2, Fraction(1), [])
    tuples = [EligibleTuple(n, chi, a, B) for a in set(out)]
    return sorted(tuples, key=lambda e: tuple((p, t.value) for p, t in e.assignments))


def _delta_of_character(chi: QuadraticCharacter) -> int:
    """Positive squarefree Delta with Q(sqrt(+-Delta)) cut out by chi."""
    D = abs(chi.fundamental_discriminant)
    return D // 4 if D % 4 == 0 else D


def profiles_from_tuple(t: EligibleTuple) -> list:
    """Global profiles realizing the tuple's mass types and obeying the product formula."""
    n = t.n
    types = dict(t.assignments)
    if n % 2:
        Delta = 1
        w_map = {}
        for p, mt in t.assignments:
            if mt in (MassType.OddIIplus, MassType.OddIIminus):
                Delta *= p
            w_map[p] = 1 if mt is MassType.OddIIplus else -1
        branches = [w_map]
    else:
        Delta = _delta_of_character(t.character)
        base = {p: -1 for p, mt in t.assignments if mt in (MassType.EvenI, MassType.EvenII)}
        ramified = [p for p, mt in t.assignments if mt is MassType.EvenIII]
        branches = []
        for mask in range(2 ** len(ramified)):
            w_map = dict(base)
            for i, p in enumerate(ramified):
                w_map[p] = -1 if mask >> i & 1 else 1
            branches.append(w_map)
    out = []
    for w_map in branches:
        prof = GlobalProfile.build(n, Delta, w_map)
        got = {e.p: e.mass_type for e in prof.local if e.mass_type is not MassType.Generic}
        if got != types:
            raise AssertionError(f"profile {prof} does not carry the mass types {types}")
        if check_product_formula(prof):
            out.append(prof)
    return out


@lru_cache(maxsize=None)
def _twist_floor(r: int, bits: int = DEFAULT_BITS) -> Fraction:
    """Rational lower bound for 2 Gamma(r) zeta(2r) / ((2 pi)^r zeta(r)).

    This bounds |L(1-r, chi)|/2^t from below for every quadratic chi of the
    right parity, the trivial one included.
    """
    expr = (
        "div",
        ("mul", 2, ("gamma", r), ("zeta", 2 * r)),
        ("mul", ("pow", ("mul", 2, "pi"), r), ("zeta", r)),
    )
    return eval_interval(expr, bits).lower


def min_mass_lower_bound(n: int) -> Fraction:
    """Certified lower bound for Mass+ of any maximal lattice of rank n."""
    if n < 3:
        raise ValueError("n must be >= 3")
    base = rank_prefactor(n)
    if n % 2:
        return base * (Fraction(1, 2) if n == 3 else 1)
    return base * _twist_floor(n // 2) * (Fraction(1, 2) if n == 4 else 1)


def minkowski_bound(n: int) -> int:
    """Every finite subgroup of GL_n(Z) has order dividing this number:
    prod_p p^(sum_{j>=0} floor(n / (p^j (p-1))))."""
    out = 1
    for p in primerange(2, n + 2):
        e, step = 0, p - 1
        while step <= n:
            e += n // step
            step *= p
        out *= p**e
    return out


def unit_mass_possible(mass_plus: Fraction, n: int) -> bool:
    """Whether Mass+ = 2/|Aut| for some automorphism group of a rank-n lattice.

    A genus of class number one has Mass+ = 2/|Aut| = 1/m with 2m dividing
    the Minkowski bound.
    """
    mass_plus = Fraction(mass_plus)
    if mass_plus.numerator != 1:
        return False
    return minkowski_bound(n) % (2 * mass_plus.denominator) == 0


def scan_horizon(B, check_to: int = 60) -> int:
    """First rank n0 with min_mass_lower_bound(n) > B for every n >= n0.

    Ranks up to ``check_to`` are checked exactly; beyond it the bound grows
    because |zeta(1-2k)| increases for k >= 4 and is >= 2 at the edge, and the
    twist floor increases once r >= 11. Raises if the certificate fails.
    """
    B = Fraction(B)
    last_bad = 2
    for n in range(3, check_to + 1):
        if min_mass_lower_bound(n) <= B:
            last_bad = n
    n0 = last_bad + 1
    k_edge = (check_to - 1) // 2
    if n0 > check_to - 2 or abs(zeta_special(k_edge)) < 2 or k_edge < 11:
        raise RuntimeError(f"cannot certify a scan horizon for B = {B} below rank {check_to}")
    return n0
