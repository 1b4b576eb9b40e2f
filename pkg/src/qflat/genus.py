"""Kneser p-neighbors and genus traversal.

A genus is explored breadth-first through p-neighbors at primes not dividing
2 det_H. When a target mass is known, traversal stops exactly when the
representatives found so far account for all of it, and further primes are
adjoined if one prime's neighbor graph (a spinor genus) falls short.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import nextprime

from qflat.lattice import (
    IntegralForm,
    automorphism_group,
    fingerprint,
    is_isometric,
    is_maximal,
    local_profile,
    lll_reduce,
)
from qflat.lattice.maximal import projective_points
from qflat.mass import mass_from_profile

NEIGHBOR_PRIME_CAP = 200
CLOSURE_PRIMES = 2  # primes used when no target mass is available
FINGERPRINT_TERMS = 2  # theta terms; more terms cost more than the isometry tests they save


class MassOvershoot(RuntimeError):
    """Representatives account for more than the target mass."""


class PrimeCapExceeded(RuntimeError):
    pass


def neighbor_prime(f: IntegralForm, exclude=frozenset()) -> int:
    bad = 2 * f.det_H
    p = 3
    while bad % p == 0 or p in exclude:
        p = nextprime(p)
    return p


def _isotropic_lines(f: IntegralForm, p: int):
    for v in projective_points(f.n, p):
        if f.value(v) % p == 0:
            yield v


def isotropic_lines_mod_p(f: IntegralForm, p: int) -> list:
    return list(_isotropic_lines(f, p))


def p_neighbor(f: IntegralForm, p: int, line, reduce: bool = True) -> IntegralForm:
    """Form of L' = {x in L : B(x, v) = 0 mod p} + Z v/p for a lift v of ``line``."""
    n = f.n
    h = f.hessian
    v = [x % p for x in line]
    if not any(v) or f.value(v) % p:
        raise ValueError("line is not isotropic mod p")
    a = [sum(h[i][k] * v[k] for k in range(n)) % p for i in range(n)]
    j = next((i for i in range(n) if a[i]), None)
    if j is None:
        raise ValueError("line lies in the radical mod p")
    k = next(i for i in range(n) if i != j and v[i])
    s = pow(v[k], -1, p)
    v = [x * s % p for x in v]
    a = [x * s % p for x in a]
    # lift along e_j so that Q(v) = 0 mod p^2; v_k stays exactly 1
    t = (-(f.value(v) // p) * pow(a[j], -1, p)) % p
    v[j] += p * t
    assert f.value(v) % (p * p) == 0
    aj_inv = pow(a[j], -1, p)
    # columns of p * (basis of L'): p(e_i - a_i/a_j e_j) for i != j, k; p^2 e_j; v
    cols = []
    for i in range(n):
        if i in (j, k):
            continue
        c = [0] * n
        c[i] = p
        c[j] = p * (-a[i] * aj_inv % p)
        cols.append(c)
    c = [0] * n
    c[j] = p * p
    cols.append(c)
    cols.append(v)
    hp = [[sum(x[r] * h[r][s] * y[s] for r in range(n) for s in range(n)) for y in cols] for x in cols]
    if any(x % (p * p) for row in hp for x in row):
        raise AssertionError("neighbor is not integral")
    g = IntegralForm.from_hessian([[x // (p * p) for x in row] for row in hp])
    if reduce:
        g, _ = lll_reduce(g)
    return g


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class GenusRecord:
    representatives: tuple
    aut_orders: tuple
    accumulated_mass: Fraction
    target_mass: Fraction | None
    neighbor_primes_used: tuple
    certified: bool = field(default=False)

    @property
    def class_number(self) -> int:
        return len(self.representatives)

    @property
    def complete(self) -> bool:
        return self.target_mass is not None and self.accumulated_mass == self.target_mass

    def to_json(self) -> dict:
        return {
            "representatives": [f.to_json() for f in self.representatives],
            "aut_orders": list(self.aut_orders),
            "mass": _frac_str(self.accumulated_mass),
            "target_mass": None if self.target_mass is None else _frac_str(self.target_mass),
            "primes": list(self.neighbor_primes_used),
            "certified": self.certified,
        }

    @classmethod
    def from_json(cls, data) -> "GenusRecord":
        if isinstance(data, str):
            data = json.loads(data)
        tm = data.get("target_mass")
        return cls(
            tuple(IntegralForm.from_json(f) for f in data["representatives"]),
            tuple(int(a) for a in data["aut_orders"]),
            Fraction(data["mass"]),
            None if tm is None else Fraction(tm),
            tuple(data["primes"]),
            bool(data.get("certified", False)),
        )


class _Classes:
    """Pairwise non-isometric forms, bucketed by a cheap invariant."""

    def __init__(self):
        self.forms, self.auts, self.buckets = [], [], {}
        self.mass = Fraction(0)

    def add_if_new(self, g: IntegralForm) -> bool:
        key = fingerprint(g, FINGERPRINT_TERMS)
        for i in self.buckets.get(key, ()):
            if is_isometric(self.forms[i], g, f_aut=self.auts[i]) is not None:
                return False
        aut = automorphism_group(g)
        self.buckets.setdefault(key, []).append(len(self.forms))
        self.forms.append(aut.form)
        self.auts.append(aut)
        self.mass += Fraction(1, aut.order)
        return True


def genus_representatives(
    f: IntegralForm,
    target_mass: Fraction | None,
    max_classes: int | None = None,
    prime_cap: int = NEIGHBOR_PRIME_CAP,
    closure_primes: int = CLOSURE_PRIMES,
) -> GenusRecord:
    """Classes in the genus of f.

    With a target mass (Mass = sum of 1/|Aut|) the result is certified once
    the mass is exhausted. Without one, neighbor closure is taken at
    ``closure_primes`` primes and the result is not certified. ``max_classes``
    stops early once more classes than that have been found.
    """
    f, _ = lll_reduce(f)
    classes = _Classes()
    classes.add_if_new(f)
    primes: list = []

    def done():
        if target_mass is not None and classes.mass >= target_mass:
            return True
        return max_classes is not None and len(classes.forms) > max_classes

    while not done():
        if target_mass is None and len(primes) >= closure_primes:
            break
        p = neighbor_prime(f, set(primes))
        if p > prime_cap:
            raise PrimeCapExceeded(f"genus of {f} unfinished below prime cap {prime_cap}")
        primes.append(p)
        queue = deque(range(len(classes.forms)))
        while queue and not done():
            src = classes.forms[queue.popleft()]
            for line in _isotropic_lines(src, p):
                if classes.add_if_new(p_neighbor(src, p, line)):
                    queue.append(len(classes.forms) - 1)
                    if done():
                        break
    if target_mass is not None and classes.mass > target_mass:
        raise MassOvershoot(f"mass {classes.mass} exceeds target {target_mass} for {f}")
    return GenusRecord(
        tuple(classes.forms),
        tuple(a.order for a in classes.auts),
        classes.mass,
        target_mass,
        tuple(primes),
        certified=target_mass is not None and classes.mass == target_mass,
    )


def formula_mass(f: IntegralForm) -> Fraction:
    """Mass (not proper mass) of the genus of a maximal form."""
    return mass_from_profile(local_profile(f)).proper_mass / 2


def genus_of(f: IntegralForm, **kw) -> GenusRecord:
    """Certified for maximal forms, neighbor closure otherwise."""
    target = formula_mass(f) if is_maximal(f) else None
    return genus_representatives(f, target, **kw)


def class_number(f: IntegralForm) -> int:
    return genus_of(f).class_number
