import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qflat.lattice import (
    IntegralForm,
    LatticeBasis,
    automorphism_group,
    automorphism_order,
    content,
    enlarge_form,
    form_of_basis,
    is_isometric,
    is_maximal,
    is_positive_definite,
    lll_reduce,
    local_profile,
    maximal_witness,
    maximalize,
    primitive_maximal,
    rational_diagonalize,
    short_vectors,
    zvalued_lattice_in,
)
from qflat.space import RationalSpace, profile_of_space
from qflat.verify import e8_form


def random_unimodular(rng, n, steps=12):
    t = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        for r in range(n):
            t[r][i] += c * t[r][j]
    if rng.random() < 0.5:
        i, j = rng.sample(range(n), 2)
        for r in range(n):
            t[r][i], t[r][j] = t[r][j], t[r][i]
    return t


def random_form(rng, n):
    diag = [rng.randint(1, 6) for _ in range(n)]
    return IntegralForm.diagonal(diag).transform(random_unimodular(rng, n))


def basis(space, rows):
    return LatticeBasis(RationalSpace(tuple(space)), tuple(tuple(r) for r in rows))


def test_form_of_basis_examples():
    assert form_of_basis(basis((1, 1, 1), [[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == IntegralForm.diagonal([1, 1, 1])
    f = form_of_basis(basis((1, 1), [[1, 0], [1, 1]]))
    assert f.coeffs == ((1, 2), (2,))
    g = form_of_basis(basis((1, 1, 9), [[1, 0, 0], [0, 1, 0], [0, 0, Fraction(1, 3)]]))
    assert g == IntegralForm.diagonal([1, 1, 1])
    with pytest.raises(ValueError):
        form_of_basis(basis((1, 1), [[Fraction(1, 2), 0], [0, 1]]))


def test_hessian_and_polynomial():
    f = IntegralForm(2, ((1, 1), (1,)))
    assert f.hessian == ((2, 1), (1, 2))
    assert f.det_H == 3
    assert f.polynomial() == "a^2 + ab + b^2"
    assert IntegralForm.from_json(f.to_json()) == f
    assert f.bilinear([1, 0], [0, 1]) == 1
    with pytest.raises(ValueError):
        IntegralForm.from_hessian([[1, 0], [0, 2]])


def test_content():
    assert content(IntegralForm.diagonal([1, 1, 1])) == 1
    assert content(IntegralForm.diagonal([2, 2, 2])) == 2
    assert content(IntegralForm.diagonal([2, 3])) == 1


def test_rational_diagonalize():
    d, t = rational_diagonalize(IntegralForm.diagonal([1, 1, 1]))
    assert d == [1, 1, 1]
    d, _ = rational_diagonalize(IntegralForm(2, ((1, 1), (1,))))
    assert d == [1, Fraction(3, 4)]


def test_local_profile():
    prof = local_profile(IntegralForm.diagonal([1, 1, 1]))
    assert prof.Delta == 1 and prof.entry(2).w == -1
    assert local_profile(IntegralForm.diagonal([1, 1, 3])).Delta == 3
    rng = random.Random(2)
    for _ in range(30):
        f = random_form(rng, rng.randint(3, 5))
        g = f.transform(random_unimodular(rng, f.n))
        assert local_profile(f) == local_profile(g)
        d, _ = rational_diagonalize(g)
        assert profile_of_space(RationalSpace(tuple(d))) == local_profile(f)


def test_lll_examples():
    f = IntegralForm.diagonal([1, 2, 3])
    assert lll_reduce(f)[0] == f
    bad = IntegralForm(2, ((1, 2 * 10**6), (10**12 + 1,)))
    red, u = lll_reduce(bad)
    assert red == IntegralForm.diagonal([1, 1])
    assert bad.transform(u) == red


def test_lll_preserves_det():
    rng = random.Random(3)
    for _ in range(100):
        f = random_form(rng, rng.randint(2, 6))
        red, u = lll_reduce(f)
        assert red.det_H == f.det_H
        assert f.transform(u) == red


def test_short_vectors_examples():
    f = IntegralForm.diagonal([1, 1, 1])
    assert len(short_vectors(f, 1)) == 3
    # norm 1: 3 pairs, norm 2: 6 pairs
    assert len(short_vectors(f, 2)) == 9
    assert len(short_vectors(f, 2, both_signs=True)) == 18
    e8 = e8_form()
    assert len(short_vectors(e8, 1)) == 120
    assert len(short_vectors(e8, 2)) == 120 + 1080


def _box_count(f, bound):
    n = f.n
    r = 2 * bound + 2
    out = 0
    for x in itertools.product(range(-r, r + 1), repeat=n):
        if any(x) and f.value(x) <= bound:
            out += 1
    return out // 2


@settings(max_examples=40)
@given(st.integers(1, 3), st.integers(1, 20), st.randoms(use_true_random=False))
def test_short_vectors_against_box(n, bound, rng):
    f = IntegralForm.diagonal([rng.randint(1, 5) for _ in range(n)])
    if n > 1:
        f = f.transform(random_unimodular(rng, n, steps=2))
    red, _ = lll_reduce(f)
    if n == 3 and bound > 8:
        bound = 8
    assert len(short_vectors(red, bound)) == _box_count(red, bound)


@pytest.mark.parametrize(
    "form,order",
    [
        (IntegralForm.diagonal([1, 1, 1]), 48),
        (IntegralForm.diagonal([1, 1, 1, 1]), 384),
        (IntegralForm(2, ((1, 1), (1,))), 12),
        (IntegralForm.diagonal([1, 2]), 4),
    ],
)
def test_automorphism_orders(form, order):
    assert automorphism_order(form) == order


def test_e8_automorphisms():
    g = automorphism_group(e8_form())
    assert g.order == 696729600
    assert g.has_improper and g.proper_order == 348364800


def test_generators_are_automorphisms():
    f = IntegralForm(3, ((1, 1, 0), (2, 1), (3,)))
    g = automorphism_group(f)
    for m in g.generators:
        t = [list(r) for r in zip(*m.tolist())]
        assert g.form.transform(t) == g.form


def test_isometry_examples():
    f = IntegralForm.diagonal([1, 2, 3])
    g = IntegralForm.diagonal([3, 1, 2])
    t = is_isometric(f, g)
    assert t is not None and f.transform(t) == g
    assert is_isometric(IntegralForm.diagonal([1, 1, 1]), IntegralForm.diagonal([1, 1, 3])) is None
    m = form_of_basis(maximalize(zvalued_lattice_in(RationalSpace((1, 1, 9)))))
    assert is_isometric(m, IntegralForm.diagonal([1, 1, 1])) is not None
    assert is_isometric(IntegralForm.diagonal([1, 1, 2]), IntegralForm(3, ((1, 0, 0), (1, 1), (2,)))) is None


def test_isometry_random_conjugates():
    rng = random.Random(4)
    for _ in range(25):
        f = random_form(rng, rng.randint(2, 5))
        g = f.transform(random_unimodular(rng, f.n))
        t = is_isometric(f, g)
        assert t is not None and f.transform(t) == g
        assert automorphism_order(f) == automorphism_order(g)


def test_zvalued_lattice():
    f = form_of_basis(zvalued_lattice_in(RationalSpace((1, Fraction(3, 4)))))
    assert f == IntegralForm.diagonal([1, 3])
    assert form_of_basis(zvalued_lattice_in(RationalSpace((1, 1, 1)))) == IntegralForm.diagonal([1, 1, 1])


def test_maximalize_examples():
    lat = zvalued_lattice_in(RationalSpace((1, 1, 9)))
    assert not is_maximal(lat)
    assert maximal_witness(lat)[0] == 3
    m = maximalize(lat)
    assert is_maximal(m) and form_of_basis(m).det_H == 8
    three = zvalued_lattice_in(RationalSpace((1, 1, 1)))
    assert is_maximal(three)
    assert form_of_basis(maximalize(three)) == IntegralForm.diagonal([1, 1, 1])
    assert not is_maximal(IntegralForm.diagonal([1, 1, 10]))


@pytest.mark.properties
def test_maximalize_random():
    rng = random.Random(9)
    for _ in range(100):
        diag = tuple(rng.choice([1, 2, 3, 4, 5, 6, 8, 9, 12, 18, 25, 27]) for _ in range(rng.randint(3, 5)))
        lat = zvalued_lattice_in(RationalSpace(diag))
        f = form_of_basis(lat)
        m, _ = enlarge_form(f)
        assert is_maximal(m)
        assert enlarge_form(m)[0] == m
        q, r = divmod(f.det_H, m.det_H)
        assert r == 0 and math.isqrt(q) ** 2 == q  # index squared
        assert local_profile(m) == local_profile(f)


def test_primitive_maximal():
    lat = primitive_maximal(zvalued_lattice_in(RationalSpace((4, 4, 4))))
    f = form_of_basis(lat)
    assert content(f) == 1 and is_maximal(f)
    assert is_isometric(f, IntegralForm.diagonal([1, 1, 1])) is not None
    g = form_of_basis(primitive_maximal(zvalued_lattice_in(RationalSpace((2, 2, 2)))))
    assert content(g) == 1 and is_maximal(g) and g.det_H == 4
    assert is_positive_definite(g)
