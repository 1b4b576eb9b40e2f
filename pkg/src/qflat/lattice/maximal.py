"""Maximal Z-valued lattices.

L + Z(v/p) is Z-valued exactly when H v = 0 mod p and Q(v) = 0 mod p^2, and
its Hessian determinant is det_H(L)/p^2, so only primes with p^2 | det_H
need searching.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product

from sympy import factorint

from qflat.lattice.forms import IntegralForm, LatticeBasis, content, form_of_basis
from qflat.space import RationalSpace


def kernel_mod_p(m, p: int) -> list:
    """Basis of the right kernel of the integer matrix m over F_p."""
    rows = [[x % p for x in row] for row in m]
    n = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc] % p
        basis.append(v)
    return basis


def projective_points(dim: int, p: int):
    """Coefficient vectors of F_p^dim up to scaling, first nonzero entry 1."""
    for lead in range(dim):
        for tail in product(range(p), repeat=dim - lead - 1):
            yield (0,) * lead + (1,) + tail


def enlarging_vector(f: IntegralForm, p: int):
    """v with H v = 0 mod p, Q(v) = 0 mod p^2, some v_j = 1; or None."""
    ker = kernel_mod_p(f.hessian, p)
    if not ker:
        return None
    for coef in projective_points(len(ker), p):
        v = [sum(a * k[i] for a, k in zip(coef, ker)) % p for i in range(f.n)]
        if f.value(v) % (p * p) == 0:
            j = next(i for i, x in enumerate(v) if x)
            inv = pow(v[j], -1, p)
            return [x * inv % p for x in v]
    return None


def _candidate_primes(det: int) -> list:
    return sorted(p for p, e in factorint(det).items() if e >= 2)


def _as_form(x) -> IntegralForm:
    return form_of_basis(x) if isinstance(x, LatticeBasis) else x


def is_maximal(x) -> bool:
    f = _as_form(x)
    return all(enlarging_vector(f, p) is None for p in _candidate_primes(f.det_H))


def maximal_witness(x):
    """(p, v) with L + Z(v/p) a larger Z-valued lattice, or None."""
    f = _as_form(x)
    for p in _candidate_primes(f.det_H):
        v = enlarging_vector(f, p)
        if v is not None:
            return p, v
    return None


def enlarge_form(f: IntegralForm):
    """Repeatedly adjoin v/p; returns (maximal form, rational basis change).

    Row i of the returned change matrix expresses the i-th new basis vector
    in the old basis.
    """
    n = f.n
    change = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    while True:
        w = maximal_witness(f)
        if w is None:
            return f, change
        p, v = w
        j = v.index(1)
        # new b_j = (sum v_i b_i) / p
        new_row = [Fraction(v[i], p) for i in range(n)]
        rows = [[Fraction(int(i == c)) for c in range(n)] for i in range(n)]
        rows[j] = new_row
        h = f.hessian
        g = [
            [sum(rows[a][i] * h[i][k] * rows[b][k] for i in range(n) for k in range(n)) for b in range(n)]
            for a in range(n)
        ]
        f = IntegralForm.from_hessian([[int(x) for x in row] for row in g])
        change[j] = [sum(new_row[i] * change[i][k] for i in range(n)) for k in range(n)]


def _square_clearing(den: int) -> int:
    """Least s with den | s^2."""
    s = 1
    for p, e in factorint(den).items():
        s *= p ** ((e + 1) // 2)
    return s


def zvalued_lattice_in(s: RationalSpace) -> LatticeBasis:
    """Scale each coordinate vector by the least s making s^2 a_k integral."""
    n = s.n
    basis = []
    for k, a in enumerate(s.diagonal):
        row = [Fraction(0)] * n
        row[k] = Fraction(_square_clearing(a.denominator))
        basis.append(row)
    return LatticeBasis(s, tuple(tuple(r) for r in basis))


def maximalize(lat: LatticeBasis) -> LatticeBasis:
    f = form_of_basis(lat)
    _, change = enlarge_form(f)
    n = lat.ambient.n
    b = lat.basis
    basis = tuple(
        tuple(sum(change[i][k] * b[k][c] for k in range(n)) for c in range(n)) for i in range(n)
    )
    return LatticeBasis(lat.ambient, basis)


def primitive_maximal(lat: LatticeBasis) -> LatticeBasis:
    """Maximalize, then divide out the content (rescaling the ambient space)
    and maximalize again until the form is primitive."""
    lat = maximalize(lat)
    while True:
        c = content(form_of_basis(lat))
        if c == 1:
            return lat
        ambient = RationalSpace(tuple(a / c for a in lat.ambient.diagonal))
        lat = maximalize(LatticeBasis(ambient, lat.basis))
