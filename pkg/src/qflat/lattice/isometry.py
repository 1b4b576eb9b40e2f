"""Automorphism groups and isometry testing by backtracking over short vectors.

Images of basis vectors are chosen one at a time among vectors of the right
norm, and every remaining candidate list is filtered by its inner products
with the images already fixed. The automorphism group order comes from a
stabilizer chain: the orbit of each basis vector under the pointwise
stabilizer of the previous ones.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from qflat.lattice.forms import IntegralForm, bareiss_det
from qflat.lattice.reduction import lll_reduce, short_vectors


class VectorCache:
    """Short vectors (both signs) of a fixed form, extended on demand."""

    def __init__(self, f: IntegralForm):
        self.form = f
        self.top = 0
        self.V = np.zeros((0, f.n), dtype=np.int64)
        self.qs = np.zeros(0, dtype=np.int64)
        self.VH = self.V

    def by_norm(self, values) -> dict:
        top = max(values)
        if top > self.top:
            vecs = short_vectors(self.form, top, both_signs=True)
            self.V = np.array([v for v, _ in vecs], dtype=np.int64).reshape(-1, self.form.n)
            self.qs = np.array([q for _, q in vecs], dtype=np.int64)
            self.VH = self.V @ np.array(self.form.hessian, dtype=np.int64)
            self.top = top
        return {q: np.nonzero(self.qs == q)[0] for q in values}


class _Search:
    """Search for X (rows x_j in the target lattice) with x_j H_t x_k = A[j][k]."""

    def __init__(self, source: IntegralForm, target: VectorCache):
        self.n = source.n
        self.A = np.array(source.hessian, dtype=np.int64)
        self.diag_q = [source.c(j, j) for j in range(self.n)]
        self.by_norm = target.by_norm(set(self.diag_q))
        self.V, self.VH = target.V, target.VH
        self.nodes = 0

    def initial(self, fixed):
        """Candidate index lists for levels len(fixed).. given fixed images."""
        s = len(fixed)
        lists = []
        for j in range(s, self.n):
            idx = self.by_norm[self.diag_q[j]]
            for k, x in enumerate(fixed):
                idx = idx[self.VH[idx] @ x == self.A[j, k]]
            lists.append(idx)
        return lists

    def first(self, fixed, lists=None):
        """One completion of the partial assignment ``fixed``, or None."""
        if lists is None:
            lists = self.initial(fixed)
        if len(fixed) == self.n:
            return np.array(fixed)
        if any(len(c) == 0 for c in lists):
            return None
        return self._rec(list(fixed), lists)

    def _rec(self, images, lists):
        j = len(images)
        if j == self.n:
            return np.array(images)
        cur, rest = lists[0], lists[1:]
        for i in cur:
            self.nodes += 1
            x = self.V[i]
            new = []
            ok = True
            for off, c in enumerate(rest):
                c = c[self.VH[c] @ x == self.A[j + 1 + off, j]]
                if len(c) == 0:
                    ok = False
                    break
                new.append(c)
            if not ok:
                continue
            images.append(x)
            res = self._rec(images, new)
            if res is not None:
                return res
            images.pop()
        return None


def _orbit(v, gens) -> set:
    start = tuple(int(a) for a in v)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for w in frontier:
            wa = np.array(w, dtype=np.int64)
            for g in gens:
                y = tuple(int(a) for a in wa @ g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


@dataclass
class AutomorphismGroup:
    """Generators act on row coordinate vectors by v -> v @ g (rows of g are basis images)."""

    order: int
    generators: list
    has_improper: bool
    form: IntegralForm  # the (reduced) form the generators refer to
    vectors: VectorCache | None = None

    @property
    def proper_order(self) -> int:
        return self.order // 2 if self.has_improper else self.order


def automorphism_group(f: IntegralForm, reduce: bool = True) -> AutomorphismGroup:
    if reduce:
        f, _ = lll_reduce(f)
    n = f.n
    search_cache = VectorCache(f)
    search = _Search(f, search_cache)
    eye = np.eye(n, dtype=np.int64)
    gens: list = []
    order = 1
    for i in range(n - 1, -1, -1):
        fixed = [eye[k] for k in range(i)]
        cands = search.initial(fixed)[0]
        orbit = _orbit(eye[i], gens)
        dead: set = set()
        for idx in cands:
            x = tuple(int(a) for a in search.V[idx])
            if x in orbit or x in dead:
                continue
            g = search.first(fixed + [search.V[idx]])
            if g is None:
                dead |= _orbit(x, gens)
            else:
                gens.append(g)
                orbit = _orbit(eye[i], gens)
        order *= len(orbit)
    improper = any(bareiss_det(g.tolist()) == -1 for g in gens)
    return AutomorphismGroup(order, gens, improper, f, search_cache)


def automorphism_order(f: IntegralForm) -> int:
    return automorphism_group(f).order


def theta_counts(f: IntegralForm, terms: int = 4) -> tuple:
    """Numbers of +-pairs of vectors with Q = 1, ..., terms."""
    counts = Counter(q for _, q in short_vectors(f, terms))
    return tuple(counts.get(k, 0) for k in range(1, terms + 1))


def fingerprint(f: IntegralForm, terms: int = 4) -> tuple:
    return (f.n, f.det_H, theta_counts(f, terms))


def is_isometric(f: IntegralForm, g: IntegralForm, f_aut: AutomorphismGroup | None = None):
    """T with T^T H_f T = H_g (columns of T: images of g's basis in f's lattice), or None.

    If the automorphism group of f is supplied, the image of the first basis
    vector ranges only over orbit representatives.
    """
    if f.n != g.n or f.det_H != g.det_H:
        return None
    fr, uf = lll_reduce(f)
    gr, ug = lll_reduce(g)
    cache = f_aut.vectors if f_aut is not None and f_aut.form == fr and f_aut.vectors is not None else VectorCache(fr)
    search = _Search(gr, cache)
    lists = search.initial([])
    first = lists[0]
    if f_aut is not None and f_aut.form == fr and f_aut.generators:
        reps, seen = [], set()
        for idx in first:
            x = tuple(int(a) for a in search.V[idx])
            if x not in seen:
                reps.append(idx)
                seen |= _orbit(x, f_aut.generators)
        first = np.array(reps, dtype=np.int64)
    x = None
    for idx in first:
        x = search.first([search.V[idx]])
        if x is not None:
            break
    if x is None:
        return None
    # rows of x: images of gr's basis in fr coordinates; lift back to f and g
    m = x.T  # columns = images
    uf_a = np.array(uf, dtype=object)
    ug_inv = _inverse_unimodular(ug)
    t = uf_a.dot(np.array(m, dtype=object)).dot(ug_inv)
    t = [[int(a) for a in row] for row in t]
    if g.hessian != f.transform(t).hessian:
        raise AssertionError("isometry reconstruction failed")
    return t


def _inverse_unimodular(u):
    """Exact inverse of an integer matrix with determinant +-1 (object array)."""
    from fractions import Fraction

    n = len(u)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(u)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                m = a[r][c]
                a[r] = [x - m * y for x, y in zip(a[r], a[c])]
    inv = [[a[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return np.array([[int(x) for x in row] for row in inv], dtype=object)
