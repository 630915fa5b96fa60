import itertools
import math

import pytest
from hypothesis import given, strategies as st

from heistorsor import kernels
from heistorsor.specialization.bqf import (
    DiscriminantTooLarge,
    class_group_bqf,
    compose,
    identity_form,
    inverse,
    is_reduced,
    n_rank,
    power,
    prime_form,
    reduce_form,
    reduced_forms,
    witness_rank,
)


def brute_class_number(D):
    """Count reduced primitive forms by scanning every (a, b) pair directly."""
    count = 0
    for a in range(1, math.isqrt(-D) + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) == 1:
                count += 1
    return count


def fundamental(m):
    D = -m
    return D % 4 in (0, 1)


DISCS = [-3, -4, -7, -8, -15, -20, -23, -47, -71, -104, -3299, -4027, -3896]


def test_h_minus_23():
    cg = class_group_bqf(-23)
    assert cg.order == 3
    assert sorted(cg.forms) == [(1, 1, 6), (2, -1, 3), (2, 1, 3)]
    assert cg.invariants == [3]
    assert n_rank(cg, 3) == 1


def test_h_minus_4():
    cg = class_group_bqf(-4)
    assert cg.order == 1 and cg.forms == [(1, 0, 1)] and cg.invariants == []


@pytest.mark.parametrize("D,inv", [(-3299, [3, 9]), (-4027, [3, 3]), (-56, [4]), (-84, [2, 2])])
def test_known_structures(D, inv):
    cg = class_group_bqf(D)
    assert cg.invariants == inv
    assert math.prod(inv) == cg.order


@pytest.mark.parametrize("D", DISCS)
def test_class_numbers_against_brute_force(D):
    assert class_group_bqf(D).order == brute_class_number(D) == kernels.class_number(D)


@given(st.integers(3, 20000).filter(fundamental))
def test_class_number_kernel(m):
    assert kernels.class_number(-m) == len(reduced_forms(-m))


@pytest.mark.parametrize("D", [-3299, -4027, -3896, -47])
def test_group_axioms(D):
    forms = reduced_forms(D)
    e = identity_form(D)
    assert all(is_reduced(f) for f in forms)
    for f in forms:
        assert compose(f, e) == f
        assert compose(f, inverse(f)) == e
        assert power(f, len(forms), D) == e
    sample = forms[:10]
    for f, g, h in itertools.product(sample, repeat=3):
        assert compose(compose(f, g), h) == compose(f, compose(g, h))
        assert compose(f, g) == compose(g, f)


@given(st.integers(1, 500), st.integers(-500, 500), st.integers(1, 500))
def test_reduction_preserves_discriminant(a, b, c):
    D = b * b - 4 * a * c
    if D >= 0:
        return
    r = reduce_form((a, b, c))
    assert is_reduced(r)
    assert r[1] ** 2 - 4 * r[0] * r[2] == D


def represents(f, q, box=60):
    a, b, c = f
    return any(a * x * x + b * x * y + c * y * y == q for x in range(-box, box + 1) for y in range(-box, box + 1))


@pytest.mark.parametrize("D,q", [(-3299, 5), (-3299, 11), (-3299, 3), (-95, 2), (-95, 3), (-4027, 13)])
def test_split_prime_forms(D, q):
    from heistorsor.arith.integers import kronecker

    assert kronecker(D, q) == 1
    fp = prime_form(D, q, "split", 1)
    fm = prime_form(D, q, "split", -1)
    assert represents(fp, q) and represents(fm, q)
    assert compose(fp, fm) == identity_form(D)


@pytest.mark.parametrize("D,q", [(-95, 5), (-95, 19), (-84, 2), (-84, 3), (-20, 5), (-20, 2)])
def test_ramified_prime_forms_are_2_torsion(D, q):
    f = prime_form(D, q, "ramified")
    assert compose(f, f) == identity_form(D)
    assert represents(f, q)


def test_inert_primes_refused():
    with pytest.raises(ValueError):
        prime_form(-23, 5, "inert")


def test_witness_rank():
    cg = class_group_bqf(-4027)
    gens = [f for f in cg.forms if f != identity_form(-4027)]
    a = gens[0]
    b = next(g for g in gens if g not in (a, inverse(a)))
    w = witness_rank(-4027, [a, b], 3)
    assert w.orders_ok and w.independent and w.rank_lower_bound == 2
    dep = witness_rank(-4027, [a, inverse(a)], 3)
    assert not dep.independent and dep.rank_lower_bound == 0


def test_enumeration_bound():
    with pytest.raises(DiscriminantTooLarge):
        class_group_bqf(-(10**8) - 3, bound=10**7)
