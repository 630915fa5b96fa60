from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, strategies as st
from sympy.ntheory.residue_ntheory import is_nthpow_residue

from heistorsor.arith.integers import valuation
from heistorsor.specialization.quadratic import (
    PrimeOfL,
    QuadElt,
    QuadField,
    hensel_precision,
    integer_roots,
    is_local_nth_power,
    is_nth_power,
    nonpower_witness,
    nth_root,
    valuation_profile,
)
from heistorsor.arith.poly import Poly

DS = [-95, -23, -5, -2, -1, 2, 3, 5, 7, 10, 13, 22, -7, -11, -31, -3299]
rat = st.fractions(min_value=-50, max_value=50, max_denominator=12)
dfield = st.sampled_from(DS)


def elt(d):
    return st.builds(lambda a, b: QuadElt(a, b, d), rat, rat)


@st.composite
def pairs(draw):
    d = draw(dfield)
    return draw(elt(d)), draw(elt(d)), draw(elt(d))


def sym(x: QuadElt):
    return sympy.Rational(x.a.numerator, x.a.denominator) + sympy.Rational(x.b.numerator, x.b.denominator) * sympy.sqrt(x.d)


@given(pairs())
def test_field_axioms(t):
    x, y, z = t
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    if not x.is_zero():
        assert x * x.inverse() == QuadElt(1, 0, x.d)
        assert (y / x) * x == y
    assert (x * y).norm() == x.norm() * y.norm()
    assert x.conj().conj() == x


@given(pairs())
def test_arithmetic_matches_sympy(t):
    x, y, _ = t
    assert sympy.simplify(sym(x * y) - sym(x) * sym(y)) == 0
    assert sympy.simplify(sym(x**3) - sym(x) ** 3) == 0
    assert x.norm() == sympy.simplify(sym(x) * sym(x.conj()))


def test_field_validation_and_splitting():
    with pytest.raises(ValueError):
        QuadField(12)
    with pytest.raises(ValueError):
        QuadField(1)
    L = QuadField(-95)
    assert L.disc == -95 and L.imaginary
    assert L.splitting(5) == "ramified" and L.splitting(19) == "ramified"
    assert L.splitting(2) == "split"  # -95 = 1 mod 8
    assert L.splitting(3) == "split"
    assert L.splitting(7) == "inert"
    assert QuadField(2).disc == 8


@given(pairs())
def test_norm_valuation_identity(t):
    x, y, _ = t
    assume(not x.is_zero() and not y.is_zero())
    L = QuadField(x.d)
    prof = valuation_profile([x, y], L)
    assert prof.complete
    for i, al in enumerate((x, y)):
        per_q: dict[int, int] = {}
        for P, vs in prof.values.items():
            per_q[P.q] = per_q.get(P.q, 0) + vs[i] * P.residue_degree
        for q, total in per_q.items():
            assert total == valuation(al.norm(), q)


@given(pairs())
def test_valuations_are_additive(t):
    x, y, _ = t
    assume(not x.is_zero() and not y.is_zero())
    L = QuadField(x.d)
    prof = valuation_profile([x, y, x * y], L)
    for P, vs in prof.values.items():
        assert vs[2] == vs[0] + vs[1]


def test_valuation_of_rational_integers():
    L = QuadField(-95)
    prof = valuation_profile([L(12)], L)
    assert {P.label(): v[0] for P, v in prof.values.items()} == {"2+": 2, "2-": 2, "3+": 1, "3-": 1}


# -- local n-th powers ------------------------------------------------------------


def _embed(al: QuadElt, q: int, r: int, k: int) -> int:
    A, B, D = al.integral_form()
    return (A + B * r) * pow(D, -1, q**k) % q**k


@given(st.integers(-300, 300), st.integers(-300, 300), st.integers(1, 30))
def test_local_cube_at_split_three(a, b, den):
    # d = 7 = 1 mod 3, so 3 splits; units of Z_3 are cubes iff they are +-1 mod 9
    d = 7
    al = QuadElt(Fraction(a, den), Fraction(b, den), d)
    assume(den % 3 and not al.is_zero())
    r = sympy.sqrt_mod(d, 27)
    L = QuadField(d)
    for sign in (1, -1):
        P = PrimeOfL(3, "split", sign)
        x = (a + sign * b * r) * pow(den, -1, 27) % 27
        assume(x % 3)
        expected = x % 9 in (1, 8)
        assert is_local_nth_power(al, L, P, 3, 0, root=r) == expected


@given(st.sampled_from([7, 13, 19, 31, 37]), st.integers(-500, 500), st.integers(-500, 500))
def test_local_cube_at_split_tame_prime(q, a, b):
    d = next(x for x in (2, 3, 5, 6, 7, 10, 11, 13, 14, 15) if sympy.legendre_symbol(x, q) == 1)
    al = QuadElt(a, b, d)
    r = sympy.sqrt_mod(d, q)
    x = (a + b * r) % q
    assume(x)
    P = PrimeOfL(q, "split", 1)
    assert is_local_nth_power(al, QuadField(d), P, 3, 0, root=r) == is_nthpow_residue(x, 3, q)


@given(st.sampled_from([-95, -5, -2, 3, 6, 7, 10, -1, 21, -3299]), st.integers(-200, 200), st.integers(-200, 200))
def test_hensel_precision_is_stable(d, a, b):
    al = QuadElt(a, b, d)
    assume(not al.is_zero())
    L = QuadField(d)
    prof = valuation_profile([al], L, extra_primes=(3,))
    for P, vs in prof.values.items():
        if P.q != 3:
            continue
        root = prof.roots.get(3, (None,))[0]
        base = is_local_nth_power(al, L, P, 3, vs[0], root=root)
        assert base == is_local_nth_power(al, L, P, 3, vs[0], root=root, extra_precision=2)


@given(dfield, rat, rat)
def test_cubes_are_local_cubes_everywhere(d, a, b):
    g = QuadElt(a, b, d)
    assume(not g.is_zero())
    beta = g**3
    L = QuadField(d)
    prof = valuation_profile([beta], L, extra_primes=(3,))
    for P, vs in prof.values.items():
        root = prof.roots.get(P.q, (None,))[0]
        assert is_local_nth_power(beta, L, P, 3, vs[0], root=root)


def test_hensel_precision_values():
    assert hensel_precision(PrimeOfL(3, "split", 1), 3) == 3
    assert hensel_precision(PrimeOfL(3, "ramified"), 3) == 5
    assert hensel_precision(PrimeOfL(5, "inert"), 3) == 1


# -- global n-th powers ---------------------------------------------------------------


@given(st.sampled_from([d for d in DS if d != -3]), rat, rat, st.sampled_from([3, 5]))
def test_nth_root_recovers_root(d, a, b, n):
    g = QuadElt(a, b, d)
    assume(not g.is_zero())
    assert nth_root(g**n, n) == g
    assert is_nth_power(g**n, n)


def test_units_are_not_cubes():
    eps = QuadElt(1, 1, 2)
    g = QuadElt(Fraction(3, 2), -5, 2)
    assert nth_root(eps * g**3, 3) is None
    assert nth_root(eps**3 * g**3, 3) == eps * g
    assert not is_nth_power(eps * g**3, 3)


def test_nonpower_witness():
    beta = QuadElt(2, 1, -95)
    p = nonpower_witness(beta, 3)
    assert p is not None and p % 3 == 1
    assert nonpower_witness(QuadElt(2, 1, -95) ** 3, 3) is None


def test_integer_roots_match_sympy():
    x = sympy.Symbol("x")
    expr = sympy.expand((x - 3) * (x + 17) * (2 * x - 1) * (x**2 + 5))
    coeffs = [Fraction(int(c)) for c in reversed(sympy.Poly(expr, x).all_coeffs())]
    assert integer_roots(Poly(coeffs)) == [-17, 3]


def test_valuation_at_inert_and_ramified_primes():
    L = QuadField(-95)
    prof = valuation_profile([L(49 * 5), L(0, 1)], L)
    vals = {P.label(): v for P, v in prof.values.items()}
    assert vals["7i"] == [2, 0]
    assert vals["5r"] == [2, 1]
    assert vals["19r"] == [0, 1]


def test_split_unit_with_q_in_denominator():
    # (1 + sqrt(-95))^3 / 27 is a unit at one prime above 3 and has valuation -6 at the other
    L = QuadField(-95)
    beta = L(1, 1) ** 3 / 27
    prof = valuation_profile([beta], L)
    for P, vs in prof.values.items():
        if P.q == 3 and vs[0] % 3 == 0:
            root = prof.roots[3][0]
            assert is_local_nth_power(beta, L, P, 3, vs[0], root=root) == is_local_nth_power(
                beta, L, P, 3, vs[0], root=root, extra_precision=3
            )
