"""Integer-valued quadratic forms, Hessians, and lattices in diagonal spaces."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from qflat.space import GlobalProfile, RationalSpace, profile_of_space


def bareiss_det(m) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class IntegralForm:
    """Q(x) = sum_{i<=j} c_ij x_i x_j; ``coeffs[i]`` lists c_ii, ..., c_in."""

    n: int
    coeffs: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(c) for c in row) for row in self.coeffs)
        if len(rows) != self.n or any(len(rows[i]) != self.n - i for i in range(self.n)):
            raise ValueError("coeffs must be upper-triangular rows of lengths n, n-1, ..., 1")
        object.__setattr__(self, "coeffs", rows)

    @classmethod
    def from_hessian(cls, h) -> "IntegralForm":
        n = len(h)
        rows = []
        for i in range(n):
            if h[i][i] % 2:
                raise ValueError("Hessian diagonal must be even")
            rows.append([int(h[i][i]) // 2] + [int(h[i][j]) for j in range(i + 1, n)])
        return cls(n, tuple(tuple(r) for r in rows))

    @classmethod
    def diagonal(cls, entries) -> "IntegralForm":
        n = len(entries)
        return cls(n, tuple((a,) + (0,) * (n - 1 - i) for i, a in enumerate(entries)))

    def c(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return self.coeffs[i][j - i]

    @property
    def hessian(self) -> tuple:
        n = self.n
        return tuple(
            tuple(2 * self.c(i, i) if i == j else self.c(i, j) for j in range(n)) for i in range(n)
        )

    @property
    def det_H(self) -> int:
        return bareiss_det(self.hessian)

    def value(self, x) -> int:
        return sum(self.c(i, j) * x[i] * x[j] for i in range(self.n) for j in range(i, self.n))

    def bilinear(self, x, y) -> int:
        """B_H(x, y) = Q(x + y) - Q(x) - Q(y) = x^T H y."""
        h = self.hessian
        return sum(x[i] * h[i][j] * y[j] for i in range(self.n) for j in range(self.n))

    def transform(self, t) -> "IntegralForm":
        """Form of the basis given by the columns of t: T^T H T."""
        h = self.hessian
        n = self.n
        ht = [[sum(h[i][k] * t[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        return IntegralForm.from_hessian(
            [[sum(t[k][i] * ht[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        )

    def to_json(self) -> dict:
        return {"rank": self.n, "coeffs": [list(r) for r in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> "IntegralForm":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["rank"]), tuple(tuple(r) for r in data["coeffs"]))

    def polynomial(self, names: str = "abcdefghij") -> str:
        """Readable polynomial in graded-lex term order, e.g. 'a^2 + ab + b^2'."""
        if self.n > len(names):
            names = [f"x{i + 1}" for i in range(self.n)]
        terms = []
        for i in range(self.n):
            for j in range(i, self.n):
                c = self.c(i, j)
                if c == 0:
                    continue
                mono = f"{names[i]}^2" if i == j else f"{names[i]}{names[j]}"
                coef = "" if abs(c) == 1 else str(abs(c))
                sign = "-" if c < 0 else "+"
                terms.append((sign, coef + mono))
        if not terms:
            return "0"
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, t in terms[1:]:
            out += f" {sign} {t}"
        return out

    def __str__(self):
        return self.polynomial()


def content(f: IntegralForm) -> int:
    g = 0
    for row in f.coeffs:
        for c in row:
            g = gcd(g, c)
    return g


def is_positive_definite(f: IntegralForm) -> bool:
    h = f.hessian
    return all(bareiss_det([row[:k] for row in h[:k]]) > 0 for k in range(1, f.n + 1))


def rational_diagonalize(f: IntegralForm):
    """(diagonal, T) with T G T^T = diag for the Gram matrix G = H/2.

    Rows of T are the new orthogonal basis vectors in old coordinates.
    """
    n = f.n
    g = [[Fraction(x, 2) for x in row] for row in f.hessian]
    t = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        if g[k][k] == 0:
            raise ValueError("form is not positive definite")
        for i in range(k + 1, n):
            m = g[i][k] / g[k][k]
            if m == 0:
                continue
            for j in range(n):
                g[i][j] -= m * g[k][j]
            for j in range(n):
                g[j][i] -= m * g[j][k]
            for j in range(n):
                t[i][j] -= m * t[k][j]
    diag = [g[k][k] for k in range(n)]
    if any(d <= 0 for d in diag):
        raise ValueError("form is not positive definite")
    return diag, t


def space_of(f: IntegralForm) -> RationalSpace:
    return RationalSpace(tuple(rational_diagonalize(f)[0]))


def local_profile(f: IntegralForm) -> GlobalProfile:
    return profile_of_space(space_of(f))


@dataclass(frozen=True)
class LatticeBasis:
    """Lattice spanned by the rows of ``basis`` inside a diagonal space."""

    ambient: RationalSpace
    basis: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.basis)
        n = self.ambient.n
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("basis must be n x n")
        object.__setattr__(self, "basis", rows)

    def gram(self) -> list:
        """B(v_i, v_j) = sum_k d_k v_ik v_jk."""
        d = self.ambient.diagonal
        b = self.basis
        n = len(b)
        return [[sum(d[k] * b[i][k] * b[j][k] for k in range(n)) for j in range(n)] for i in range(n)]


def form_of_basis(lat: LatticeBasis) -> IntegralForm:
    g = lat.gram()
    n = len(g)
    h = [[2 * g[i][j] for j in range(n)] for i in range(n)]
    for row in h:
        for x in row:
            if x.denominator != 1:
                raise ValueError("basis does not span a Z-valued lattice")
    for i in range(n):
        if h[i][i].numerator % 2:
            raise ValueError("basis does not span a Z-valued lattice")
    return IntegralForm.from_hessian([[int(x) for x in row] for row in h])
