import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from heistorsor.arith.modular import GF
from heistorsor.arith.poly import Poly
from heistorsor.jacobian.curve import (
    INF,
    INF_MINUS,
    INF_PLUS,
    BadPrime,
    CurveError,
    EvenDivisor,
    FamilyParams,
    HyperellipticCurve,
    family_curve,
    family_poly,
    good_primes,
    second_identity_holds,
    seed_identity_holds,
    to_odd_model,
)
from heistorsor.jacobian.mumford import (
    CorruptDivisor,
    MumfordDivisor,
    add,
    all_points,
    audit,
    from_json,
    has_exact_order,
    miller,
    neg,
    order_from_multiple,
    point_divisor,
    random_class,
    scalar_mul,
)
from heistorsor.jacobian.pointcount import (
    UnsupportedGenus,
    count_points,
    jacobian_order_mod_p,
    l_polynomial,
)
from heistorsor.pairing import AffineRep, disjoint_representative, miller_function

GENUS2_F7 = (1, 3, 2, 3, 0, 1)


def brute_jacobian(C):
    """Count reduced Mumford pairs (u, v): deg v < deg u <= g, u | v^2 - f."""
    p, g = C.p, C.genus
    R = C.ring
    total = 0
    for k in range(g + 1):
        for low in itertools.product(range(p), repeat=k):
            u = Poly(list(low) + [1], R)
            for vc in itertools.product(range(p), repeat=k):
                v = Poly(list(vc), R)
                if u.divides(v * v - C.f):
                    total += 1
    return total


def brute_points(C):
    p = C.p
    n = sum(1 + (C.f(x) != 0) for x in range(p) if C.f(x) == 0 or pow(C.f(x), (p - 1) // 2, p) == 1)
    if C.odd:
        return n + 1
    lc = int(C.f.lc)
    return n + (2 if pow(lc, (p - 1) // 2, p) == 1 else 0)


@pytest.fixture(scope="module")
def odd3():
    return to_odd_model(family_curve(FamilyParams(3, Fraction(2))), 1)


# -- curves ------------------------------------------------------------------


@pytest.mark.parametrize("n,lam", [(3, 2), (5, 2), (3, Fraction(1, 3)), (7, 3), (9, 5)])
def test_family_identities(n, lam):
    P = FamilyParams(n, Fraction(lam))
    assert seed_identity_holds(P)
    assert second_identity_holds(P)
    f = family_poly(P)
    assert f.deg == 2 * n and f(Fraction(1)) == 0


@pytest.mark.parametrize("n,lam", [(4, 2), (3, 0), (3, 1), (3, -1), (1, 2)])
def test_family_rejects_bad_parameters(n, lam):
    with pytest.raises(CurveError):
        FamilyParams(n, Fraction(lam))


def test_curve_rejects_singular():
    with pytest.raises(CurveError):
        HyperellipticCurve(Poly([0, 0, 1, 1]))
    with pytest.raises(CurveError):
        HyperellipticCurve(Poly([1, 1]))


def test_bad_primes_refused(odd3):
    with pytest.raises(BadPrime):
        odd3.reduce_mod_p(3, 3)
    with pytest.raises(BadPrime):
        odd3.reduce_mod_p(2, 3)
    primes = good_primes(odd3, 3, 3)
    assert primes == [7, 13, 19]
    assert all(p % 3 == 1 for p in primes)


def test_odd_model_point_transport(odd3):
    M = odd3
    assert M.odd.f.deg == 5
    assert M.point_to_odd((Fraction(1), Fraction(0))) == INF
    for P in [(Fraction(0), Fraction(2)), (Fraction(0), Fraction(-2)), INF_PLUS, INF_MINUS]:
        Q = M.point_to_odd(P)
        assert M.odd.is_point(*Q)
        assert M.point_to_even(Q) == P


@given(st.integers(0, 10**6))
def test_class_transport_round_trip_mod_p(seed):
    M = to_odd_model(family_curve(FamilyParams(3, Fraction(2))), 1).reduce_mod_p(13, 3)
    D = random_class(M.odd, random.Random(seed))
    E = M.class_to_even(D)
    assert isinstance(E, EvenDivisor) and E.degree == 0
    assert M.class_to_odd(E) == D


# -- point counting ------------------------------------------------------------


@pytest.mark.parametrize("p", [7, 13, 19])
def test_family_jacobian_orders_against_enumeration(odd3, p):
    Cp = odd3.reduce_mod_p(p, 3).odd
    N = jacobian_order_mod_p(Cp)
    assert N == brute_jacobian(Cp)
    assert N == {7: 36, 13: 252, 19: 252}[p]


@pytest.mark.parametrize("p,coeffs", [(5, (1, 2, 0, 1, 0, 0, 0, 1)), (7, (3, 0, 1, 0, 0, 0, 0, 1)), (7, GENUS2_F7)])
def test_jacobian_order_small_cases(p, coeffs):
    C = HyperellipticCurve(Poly(list(coeffs), GF(p)))
    assert jacobian_order_mod_p(C) == brute_jacobian(C)


def test_genus2_fixture_order():
    assert jacobian_order_mod_p(HyperellipticCurve(Poly(list(GENUS2_F7), GF(7)))) == 54


@pytest.mark.parametrize("p", [7, 11, 13, 31])
def test_count_points_even_and_odd(odd3, p):
    M = odd3.reduce_mod_p(p, 3)
    assert count_points(M.even) == brute_points(M.even)
    assert count_points(M.odd) == brute_points(M.odd)
    assert count_points(M.even) == count_points(M.odd)


def test_l_polynomial_functional_equation(odd3):
    C = odd3.reduce_mod_p(13, 3).odd
    L = l_polynomial(C)
    g, p = C.genus, 13
    assert L[0] == 1 and L[2 * g] == p**g
    assert all(L[2 * g - i] == p ** (g - i) * L[i] for i in range(g + 1))


def test_genus_four_unsupported():
    C = to_odd_model(family_curve(FamilyParams(5, Fraction(2))), 1).reduce_mod_p(11, 5).odd
    with pytest.raises(UnsupportedGenus):
        l_polynomial(C)


# -- Cantor arithmetic -------------------------------------------------------


def curve_f7():
    return HyperellipticCurve(Poly(list(GENUS2_F7), GF(7)))


@given(st.integers(0, 10**9))
def test_group_law_properties(seed):
    C = curve_f7()
    rng = random.Random(seed)
    a, b, c = (random_class(C, rng) for _ in range(3))
    assert add(add(a, b), c) == add(a, add(b, c))
    assert add(a, b) == add(b, a)
    assert add(a, neg(a)).is_zero()
    assert add(a, C.zero()) == a
    assert scalar_mul(54, a).is_zero()
    assert scalar_mul(5, a) == add(scalar_mul(2, a), scalar_mul(3, a))
    assert (a + b).is_reduced()


def test_corrupt_divisor_rejected():
    C = curve_f7()
    with pytest.raises(CorruptDivisor):
        MumfordDivisor(C, Poly([1, 1], C.ring), Poly([3], C.ring))


def test_json_round_trip():
    C = curve_f7()
    D = random_class(C, random.Random(3))
    assert from_json(C, D.to_json()) == D


def test_orders_divide_group_order():
    C = curve_f7()
    pts = [P for P in all_points(C) if P != INF]
    for P in pts:
        D = point_divisor(C, *P)
        assert 54 % order_from_multiple(D, 54) == 0


def test_miller_function_has_the_right_divisor():
    C = curve_f7()
    a = MumfordDivisor(C, Poly([6, 6, 1], C.ring), Poly([0, 4], C.ring))
    assert has_exact_order(a, 3)
    rep = disjoint_representative(a, (), random.Random(1))
    f = miller_function(rep, 3)
    assert audit(f, 3, rep.A, rep.B)["ok"]


def test_miller_loop_relation():
    C = curve_f7()
    D = random_class(C, random.Random(11))
    R_, f = miller(7, D)
    assert R_ == scalar_mul(7, D)
