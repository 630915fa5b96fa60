from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.polys.subresultants_qq_zz import sylvester

from heistorsor.arith.modular import GF, QQ, DomainMismatch, IntegersMod, ModInt
from heistorsor.arith.poly import Poly, coprime_base, sqrt_mod_irreducible

X = sympy.Symbol("x")
small = st.integers(min_value=-20, max_value=20)
coeffs = st.lists(small, min_size=1, max_size=7)


def to_sympy(f: Poly, p=None):
    return sympy.Poly(list(reversed(f.c)) or [0], X, modulus=p) if p else sympy.Poly(list(reversed(f.c)) or [0], X, domain="QQ")


def from_sympy(g, ring):
    return Poly([int(c) if ring is not QQ else Fraction(str(c)) for c in reversed(g.all_coeffs())], ring)


@given(coeffs, coeffs)
def test_ring_axioms_over_q(a, b):
    f, g = Poly(a), Poly(b)
    assert f + g == g + f
    assert f * g == g * f
    assert (f - g) + g == f
    assert to_sympy(f * g) == to_sympy(f) * to_sympy(g)


@given(coeffs, coeffs.filter(lambda c: any(c)))
def test_divmod_over_q(a, b):
    f, g = Poly(a), Poly(b)
    q, r = f.divmod(g)
    assert q * g + r == f
    assert r.deg < g.deg


@given(coeffs, coeffs, st.sampled_from([5, 7, 13]))
def test_gcd_matches_sympy_mod_p(a, b, p):
    R = GF(p)
    f, g = Poly(a, R), Poly(b, R)
    if f.is_zero() and g.is_zero():
        return
    ours = f.gcd(g)
    ref = sympy.gcd(to_sympy(f, p), to_sympy(g, p))
    assert ours == from_sympy(ref.monic(), R)


@given(coeffs, coeffs, st.sampled_from([5, 7, 13]))
def test_xgcd_bezout(a, b, p):
    R = GF(p)
    f, g = Poly(a, R), Poly(b, R)
    d, s, t = f.xgcd(g)
    assert s * f + t * g == d


@given(st.lists(small, min_size=2, max_size=6), st.lists(small, min_size=2, max_size=6))
def test_resultant_matches_sylvester_determinant(a, b):
    # sympy.resultant returns Res(g, f) when deg f < deg g, so the
    # Sylvester determinant is the oracle here.
    f, g = Poly(a), Poly(b)
    if f.deg < 1 or g.deg < 1:
        return
    want = sylvester(to_sympy(f).as_expr(), to_sympy(g).as_expr(), X).det()
    assert f.resultant(g) == want


def test_resultant_sign_convention():
    f, g = Poly([1, 1]), Poly([2, 0, 0, 1])
    assert f.resultant(g) == 1
    assert g.resultant(f) == -1


@given(st.lists(small, min_size=3, max_size=7))
def test_discriminant_matches_sympy(a):
    f = Poly(a)
    if f.deg < 1:
        return
    assert f.discriminant() == sympy.discriminant(to_sympy(f).as_expr(), X)


@given(st.lists(st.integers(0, 12), min_size=2, max_size=6), st.sampled_from([3, 7, 13]))
def test_irreducibility_matches_sympy(a, p):
    f = Poly(a, GF(p))
    if f.deg < 1:
        return
    assert f.is_irreducible() == to_sympy(f, p).is_irreducible


@given(st.lists(small, min_size=2, max_size=6))
def test_squarefree_decomposition_reassembles(a):
    f = Poly(a)
    if f.deg < 1:
        return
    f = f * f * Poly([1, 1])
    prod = Poly.const(1)
    for g, e in f.squarefree_decomposition():
        assert g.is_squarefree()
        prod = prod * g**e
    assert prod.monic() == f.monic()


def test_compose_and_derivative():
    f = Poly([1, 0, 1])
    g = Poly([1, 1])
    assert f.compose(g) == Poly([2, 2, 1])
    assert Poly([5, 3, 0, 4]).derivative() == Poly([3, 0, 12])


def test_sqrt_mod_irreducible():
    R = GF(7)
    m = Poly([3, 0, 0, 1], R)  # x^3 + 3, irreducible over F_7
    assert m.is_irreducible()
    a = Poly([2, 5, 1], R)
    r = sqrt_mod_irreducible(a * a % m, m)
    assert r is not None and r * r % m == a * a % m


def test_coprime_base_factors_products():
    f, g = Poly([-1, 1]), Poly([-2, 1])
    base = coprime_base([f * g, f * f])
    assert all(a.gcd(b).deg == 0 for i, a in enumerate(base) for b in base[i + 1 :])


def test_modint_arithmetic_and_mismatch():
    a = ModInt(5, 7)
    assert a * a == ModInt(4, 7)
    assert (a / 3) * 3 == a
    with pytest.raises(DomainMismatch):
        a + ModInt(1, 5)
    assert not ModInt(2, 4).is_unit()


def test_integers_mod_rings():
    assert IntegersMod(9).convert(10) == 1
    with pytest.raises(ValueError):
        GF(9)
    assert QQ.convert(Fraction(1, 2)) == Fraction(1, 2)
