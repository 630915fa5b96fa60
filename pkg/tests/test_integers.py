from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from heistorsor.arith.integers import (
    crt,
    factor_int,
    iroot,
    is_prime,
    jacobi,
    kronecker,
    next_prime,
    primes_up_to,
    primitive_root,
    rational_nth_root,
    sqrt_mod_prime,
    sqrt_padic,
    squarefree_part,
    valuation,
)


@given(st.integers(min_value=-10, max_value=10**12))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


def test_primes_up_to_matches_sympy():
    assert primes_up_to(5000) == list(sympy.primerange(2, 5001))


@given(st.integers(min_value=0, max_value=10**9))
def test_next_prime_matches_sympy(n):
    assert next_prime(n) == sympy.nextprime(n)


@given(st.integers(min_value=2, max_value=10**15))
def test_factor_int_matches_sympy(n):
    fac = factor_int(n)
    assert fac.complete
    assert dict(fac.items()) == sympy.factorint(n)
    assert fac.value() == n


@given(st.integers(min_value=-(10**6), max_value=10**6), st.integers(min_value=1, max_value=2001).filter(lambda m: m % 2))
def test_jacobi_matches_sympy(a, m):
    assert jacobi(a, m) == sympy.jacobi_symbol(a, m)


@given(st.integers(min_value=-(10**6), max_value=10**6), st.integers(min_value=1, max_value=5000))
def test_kronecker_matches_sympy(a, m):
    assert kronecker(a, m) == sympy.kronecker_symbol(a, m)


@given(st.integers(min_value=1, max_value=10**6), st.sampled_from([2, 3, 5, 7, 13]))
def test_valuation_divides_exactly(m, p):
    v = valuation(m, p)
    assert m % p**v == 0 and m % p ** (v + 1) != 0


def test_valuation_of_fraction():
    assert valuation(Fraction(9, 250), 5) == -3
    assert valuation(Fraction(9, 250), 3) == 2


@given(st.sampled_from(list(sympy.primerange(3, 500))), st.integers(min_value=0, max_value=10**6))
def test_sqrt_mod_prime(p, a):
    r = sqrt_mod_prime(a % p, p)
    if sympy.is_quad_residue(a % p, p):
        assert r is not None and r * r % p == a % p
    else:
        assert r is None


@given(st.sampled_from([3, 5, 7, 11]), st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=10**5))
def test_sqrt_padic_lifts(p, k, a):
    a = a % p**k
    if a % p == 0:
        return
    r = sqrt_padic(a, p, k)
    if r is not None:
        assert (r * r - a) % p**k == 0
    else:
        assert not sympy.is_quad_residue(a, p)


@given(st.integers(min_value=0, max_value=10**30), st.integers(min_value=2, max_value=7))
def test_iroot(m, n):
    r, exact = iroot(m, n)
    assert r**n <= m < (r + 1) ** n
    assert exact == (r**n == m)


def test_rational_nth_root():
    assert rational_nth_root(Fraction(8, 27), 3) == Fraction(2, 3)
    assert rational_nth_root(Fraction(-8, 27), 3) == Fraction(-2, 3)
    assert rational_nth_root(Fraction(2), 2) is None


@given(st.integers(min_value=1, max_value=10**9))
def test_squarefree_part(m):
    s, c = squarefree_part(m)
    assert s * c * c == m
    assert sympy.factorint(s) == {q: 1 for q in sympy.factorint(s)}


def test_crt_matches_sympy():
    r, m = crt([2, 3, 1], [3, 5, 7])
    assert m == 105 and r == sympy.ntheory.modular.crt([3, 5, 7], [2, 3, 1])[0]


@pytest.mark.parametrize("p", [3, 7, 13, 19, 31, 101, 997])
def test_primitive_root(p):
    g = primitive_root(p)
    assert sympy.n_order(g, p) == p - 1
