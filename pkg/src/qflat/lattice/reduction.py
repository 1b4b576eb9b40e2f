"""LLL reduction and short-vector enumeration for positive definite forms."""
from __future__ import annotations

import math

import numpy as np

from qflat.lattice.forms import IntegralForm


def lll_gram(gram, delta=(99, 100)):
    """Integral LLL on a positive definite integer Gram matrix.

    Returns (reduced Gram, U) with U unimodular, its columns the new basis in
    old coordinates, so reduced = U^T gram U. Exact arithmetic throughout;
    size reduction to |mu| <= 1/2 and Lovasz parameter delta = 99/100.
    """
    num, den = delta
    n = len(gram)
    g = [list(map(int, row)) for row in gram]
    u = [[int(i == j) for j in range(n)] for i in range(n)]  # rows = basis vectors
    if n <= 1:
        return g, [list(r) for r in zip(*u)] if n else []
    d = [0] * (n + 1)  # d[i+1] = d_i in 1-based notation, d[0] = 1
    d[0] = 1
    lam = [[0] * n for _ in range(n)]

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            # b_k <- b_k - q b_l
            u[k] = [a - q * b for a, b in zip(u[k], u[l])]
            gkk, gkl, gll = g[k][k], g[k][l], g[l][l]
            for j in range(n):
                if j != k:
                    g[k][j] -= q * g[l][j]
                    g[j][k] = g[k][j]
            g[k][k] = gkk - 2 * q * gkl + q * q * gll
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k):
        u[k], u[k - 1] = u[k - 1], u[k]
        g[k], g[k - 1] = g[k - 1], g[k]
        for row in g:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        b = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (b * t + lm * lam[i][k]) // d[k + 1]
        d[k] = b

    d[1] = g[0][0]
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                x = g[k][j]
                for i in range(j):
                    x = (d[i + 1] * x - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = x
                else:
                    if x <= 0:
                        raise ValueError("Gram matrix is not positive definite")
                    d[k + 1] = x
        red(k, k - 1)
        if den * d[k + 1] * d[k - 1] < num * d[k] * d[k] - den * lam[k][k - 1] ** 2:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return g, [list(r) for r in zip(*u)]


def lll_reduce(f: IntegralForm):
    """(reduced form, U) with reduced = U^T H U on Hessians."""
    g, u = lll_gram(f.hessian)
    return IntegralForm.from_hessian(g), u


def _cholesky_coeffs(h):
    """q with x^T h x = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2."""
    n = len(h)
    q = [[float(h[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def short_vectors(f: IntegralForm, bound: int, both_signs: bool = False, reduce: bool = True):
    """All nonzero x with Q(x) <= bound as (x, Q(x)).

    One of +-x is reported unless both_signs is set; the kept one has its
    last nonzero coordinate positive. The enumeration runs on an LLL-reduced
    basis so the floating-point bounds stay well conditioned.
    """
    n = f.n
    if reduce:
        g, u = lll_gram(f.hessian)
    else:
        g, u = [list(r) for r in f.hessian], [[int(i == j) for j in range(n)] for i in range(n)]
    target = 2 * bound  # compare on x^T H x
    q = _cholesky_coeffs(g)
    slack = 1e-7 * (1 + target)
    found = []
    x = [0] * n

    def rec(i, remaining):
        c = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        r = math.sqrt(max(remaining, 0.0) / q[i][i]) + 1e-7
        for xi in range(math.ceil(c - r), math.floor(c + r) + 1):
            x[i] = xi
            rem = remaining - q[i][i] * (xi - c) ** 2
            if rem < -slack:
                continue
            if i == 0:
                if any(x):
                    found.append(tuple(x))
            else:
                rec(i - 1, rem)
        x[i] = 0

    rec(n - 1, target + slack)
    if not found:
        return []
    h = f.hessian
    y = np.array(found, dtype=np.int64)
    big = max(abs(a) for row in u for a in row) * int(np.abs(y).max()) * n
    hmax = max(abs(a) for row in h for a in row)
    dt = np.int64 if big * big * hmax * n * n < 2**62 else object
    vs = y.astype(dt).dot(np.array(u, dtype=dt).T)  # rows: vectors in f's coordinates
    vals = ((vs.dot(np.array(h, dtype=dt))) * vs).sum(axis=1)
    res = []
    for v, val in zip(vs.tolist(), vals.tolist()):
        if val > target:
            continue
        last = next(c for c in reversed(v) if c)
        if both_signs or last > 0:
            res.append((tuple(v), val // 2))
    res.sort(key=lambda t: (t[1], t[0]))
    return res
