import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from qflat.local import (
    REAL,
    GHYLocalData,
    LocalStdInvariants,
    MassType,
    all_squareclasses,
    anisotropic_dimension,
    direct_sum_invariants,
    ghy_from_std,
    hilbert_symbol,
    is_ramified_quadratic_ext,
    mass_type,
    squareclass_of,
    std_from_ghy,
    std_invariants_of_diagonal,
)


def _solvable(a, b, p, k):
    """Primitive solution of a x^2 + b y^2 = z^2 modulo p^k (brute force)."""
    m = p**k
    r = np.arange(m, dtype=np.int64)
    sq = r * r % m
    lhs = (a * sq[:, None] + b * sq[None, :]) % m
    zs = set(sq[r % p != 0].tolist())
    zs_all = set(sq.tolist())
    for x in range(m):
        for y in range(m):
            prim_xy = x % p or y % p
            if lhs[x, y] in (zs_all if prim_xy else zs):
                return True
    return False


def _isotropic(coeffs, p, k):
    m = p**k
    n = len(coeffs)
    grids = np.meshgrid(*[np.arange(m, dtype=np.int64)] * n, indexing="ij")
    q = sum(c * g * g for c, g in zip(coeffs, grids)) % m
    prim = np.zeros_like(q, dtype=bool)
    for g in grids:
        prim |= g % p != 0
    return bool(np.any((q == 0) & prim))


def test_squareclass_examples():
    s = squareclass_of(18, 3)
    assert s.val == 0 and s.unit == 2
    assert squareclass_of(4, 2).is_square
    assert squareclass_of(-5, REAL).unit == -1
    assert squareclass_of(Fraction(12, 25), 3) == squareclass_of(3, 3)
    with pytest.raises(ValueError):
        squareclass_of(0, 3)


@pytest.mark.parametrize("p,count", [(REAL, 2), (2, 8), (3, 4), (5, 4), (7, 4)])
def test_squareclass_counts(p, count):
    assert len(set(all_squareclasses(p))) == count


def test_square_scaling_invariance():
    rng = random.Random(1)
    for _ in range(200):
        t = Fraction(rng.randint(-500, 500) or 1, rng.randint(1, 50))
        s = Fraction(rng.randint(1, 30), rng.randint(1, 30))
        for p in (REAL, 2, 3, 5, 7):
            assert squareclass_of(t * s * s, p) == squareclass_of(t, p)


def test_hilbert_examples():
    assert hilbert_symbol(1, 7, 2) == 1
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(2, 3, 3) == -1
    assert hilbert_symbol(-1, -1, REAL) == -1
    assert hilbert_symbol(-1, -1, 3) == 1


@pytest.mark.parametrize("p,k", [(2, 5), (3, 3), (5, 3)])
def test_hilbert_against_solubility_oracle(p, k):
    for a in all_squareclasses(p):
        for b in all_squareclasses(p):
            assert (hilbert_symbol(a, b, p) == 1) == _solvable(a.rep, b.rep, p, k), (a, b)


@pytest.mark.properties
@pytest.mark.parametrize("p", [REAL, 2, 3, 5])
def test_hilbert_symmetric_bilinear(p):
    cls = all_squareclasses(p)
    for a in cls:
        assert hilbert_symbol(a, -a.rep, p) == 1
        for b in cls:
            assert hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p)
            for c in cls:
                bc = b.rep * c.rep
                assert hilbert_symbol(a, bc, p) == hilbert_symbol(a, b, p) * hilbert_symbol(a, c, p)


@pytest.mark.properties
def test_hilbert_product_formula():
    from sympy import factorint

    rng = random.Random(7)
    for _ in range(200):
        a = Fraction(rng.choice([-1, 1]) * rng.randint(1, 3000), rng.randint(1, 40))
        b = Fraction(rng.choice([-1, 1]) * rng.randint(1, 3000), rng.randint(1, 40))
        places = {2} | set(factorint(abs(a.numerator * a.denominator))) | set(factorint(abs(b.numerator * b.denominator)))
        prod = hilbert_symbol(a, b, REAL)
        for p in places:
            prod *= hilbert_symbol(a, b, p)
        assert prod == 1


def test_std_invariants_examples():
    inv = std_invariants_of_diagonal([1, 1, 1], 2)
    assert (inv.n, inv.d.is_square, inv.c) == (3, True, 1)
    one = std_invariants_of_diagonal([5], 3)
    assert one.c == 1
    inv = std_invariants_of_diagonal([2, 3, 6], 5)
    assert inv.d.is_square
    assert inv.c == hilbert_symbol(2, 3, 5) * hilbert_symbol(2, 6, 5) * hilbert_symbol(3, 6, 5)
    with pytest.raises(ValueError):
        std_invariants_of_diagonal([], 3)


def test_direct_sum():
    a = std_invariants_of_diagonal([1], 3)
    s = direct_sum_invariants(a, a)
    assert (s.n, s.d.is_square, s.c) == (2, True, 1)
    # H + H at p = 2, with H = <1, -1>
    h = std_invariants_of_diagonal([1, -1], 2)
    hh = direct_sum_invariants(h, h)
    assert hh == std_invariants_of_diagonal([1, -1, 1, -1], 2)
    assert hh.d.is_square and hh.c == -1
    with pytest.raises(ValueError):
        direct_sum_invariants(a, h)


def test_anisotropic_dimension_examples():
    assert anisotropic_dimension(std_invariants_of_diagonal([1, 1, 1], 2)) == 3
    assert anisotropic_dimension(std_invariants_of_diagonal([1, 1, 1], 5)) == 1
    assert anisotropic_dimension(std_invariants_of_diagonal([1, 1, 1, 1], 2)) == 4
    for r in range(1, 5):
        diag = [1, -1] * r
        assert anisotropic_dimension(std_invariants_of_diagonal(diag, 2)) == 0


@pytest.mark.parametrize("p,k", [(3, 2), (5, 2)])
def test_isotropy_against_search(p, k):
    units = [1, 2] if p == 3 else [1, 2]
    entries = [u * p**v for u in units for v in (0, 1)]
    for n in (2, 3):
        for coeffs in itertools.combinations_with_replacement(entries, n):
            aniso = anisotropic_dimension(std_invariants_of_diagonal(coeffs, p))
            assert (aniso < n) == _isotropic(coeffs, p, k + 1), coeffs


def test_isotropy_against_search_dyadic():
    rng = random.Random(3)
    entries = [u * 2**v for u in (1, 3, 5, 7) for v in (0, 1)]
    for _ in range(25):
        coeffs = [rng.choice(entries) for _ in range(3)]
        aniso = anisotropic_dimension(std_invariants_of_diagonal(coeffs, 2))
        assert (aniso < 3) == _isotropic(coeffs, 2, 5), coeffs


def test_ghy_examples():
    g = ghy_from_std(std_invariants_of_diagonal([1, 1, 1], 2))
    assert g.delta == squareclass_of(-1, 2) and g.w == -1 and g.mass_type is MassType.OddI
    g = ghy_from_std(std_invariants_of_diagonal([1, 1, 1], 5))
    assert g.delta == squareclass_of(-1, 5) and g.w == 1 and g.mass_type is MassType.Generic
    inv = LocalStdInvariants(2, 4, squareclass_of(1, 2), -hilbert_symbol(-1, -1, 2))
    g = ghy_from_std(inv)
    assert g.delta.is_square and g.w == -1 and g.mass_type is MassType.EvenI
    back = std_from_ghy(GHYLocalData(2, 3, squareclass_of(-1, 2), -1))
    assert back.d.is_square and back.c == 1
    for r in range(2, 6):
        inv = std_from_ghy(GHYLocalData(3, 2 * r, squareclass_of(1, 3), 1))
        assert inv.d == squareclass_of((-1) ** r, 3)
        assert inv.c == hilbert_symbol(-1, -1, 3) ** (r // 2)


@pytest.mark.properties
@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_round_trip_exhaustive(p):
    for n in range(3, 11):
        for delta in all_squareclasses(p):
            for w in (1, -1):
                data = GHYLocalData(p, n, delta, w)
                assert ghy_from_std(std_from_ghy(data)) == data
        for d in all_squareclasses(p):
            for c in (1, -1):
                inv = LocalStdInvariants(p, n, d, c)
                assert std_from_ghy(ghy_from_std(inv)) == inv


def test_mass_type_table():
    sq, unr, ram = squareclass_of(1, 3), squareclass_of(2, 3), squareclass_of(3, 3)
    assert mass_type(3, sq, 1) is MassType.Generic
    assert mass_type(3, sq, -1) is MassType.OddI
    assert mass_type(3, ram, 1) is MassType.OddIIplus
    assert mass_type(3, ram, -1) is MassType.OddIIminus
    assert mass_type(4, sq, -1) is MassType.EvenI
    assert mass_type(4, unr, -1) is MassType.EvenII
    assert mass_type(4, unr, 1) is MassType.Generic
    assert mass_type(4, ram, 1) is mass_type(4, ram, -1) is MassType.EvenIII
    # at 2, ramification is decided by the extension, not by the valuation
    assert mass_type(4, squareclass_of(3, 2), 1) is MassType.EvenIII
    assert mass_type(4, squareclass_of(5, 2), -1) is MassType.EvenII


def test_ramified_extensions():
    assert is_ramified_quadratic_ext(squareclass_of(7, 7))
    assert not is_ramified_quadratic_ext(squareclass_of(5, 2))
    assert is_ramified_quadratic_ext(squareclass_of(3, 2))
    assert not is_ramified_quadratic_ext(squareclass_of(1, 5))
