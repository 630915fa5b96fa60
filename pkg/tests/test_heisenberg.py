import itertools
import math

import pytest
from hypothesis import given, strategies as st

from heistorsor.heisenberg import (
    GroupMismatch,
    HeisGroup,
    check_structure,
    crt_combine,
    crt_split,
    gsp_order,
    matmul_mod,
)


def elements(G):
    n, d = G.n, G.d
    vec = st.tuples(*[st.integers(0, n - 1)] * d)
    return st.builds(lambda a, b, c: G.element(a, b, c), vec, vec, st.integers(0, n - 1))


GROUPS = [HeisGroup(3, 1), HeisGroup(5, 2), HeisGroup(15, 1), HeisGroup(9, 1)]


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: f"n{G.n}d{G.d}")
def test_group_law_matches_matrices(G):
    @given(elements(G), elements(G))
    def run(x, y):
        assert G.to_matrix(G.mul(x, y)) == matmul_mod(G.to_matrix(x), G.to_matrix(y), G.n)
        assert G.from_matrix(G.to_matrix(x)) == x

    run()


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: f"n{G.n}d{G.d}")
def test_axioms_and_center(G):
    @given(elements(G), elements(G), elements(G))
    def run(x, y, z):
        assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))
        assert G.mul(x, G.inv(x)) == G.identity
        comm = G.commutator(x, y)
        assert G.is_central(comm)
        expected = sum(a * b for a, b in zip(x.a, y.b)) - sum(a * b for a, b in zip(y.a, x.b))
        assert comm.c == expected % G.n
        assert G.power(x, G.n) == G.identity if G.n % 2 else True

    run()


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: f"n{G.n}d{G.d}")
def test_twist_is_automorphism(G):
    units = [t for t in range(1, G.n) if math.gcd(t, G.n) == 1]

    @given(elements(G), elements(G), st.sampled_from(units))
    def run(x, y, t):
        assert G.twist_apply(t, G.mul(x, y)) == G.mul(G.twist_apply(t, x), G.twist_apply(t, y))

    run()


def test_exhaustive_structure_small():
    rep = check_structure(HeisGroup(3, 1))
    assert rep["ok"] and rep["counted_order"] == 27 and rep["center_order"] == 3 and rep["exponent"] == 3


def test_even_n_has_exponent_2n():
    G = HeisGroup(2, 1)
    assert max(G.element_order(g) for g in G.elements()) == 4


def test_crt_round_trip():
    G = HeisGroup(15, 1)
    g = G.element((7,), (11,), 4)
    gp, gq = crt_split(g, 3, 5)
    assert crt_combine(gp, gq) == g
    h = G.element((2,), (9,), 13)
    hp, hq = crt_split(h, 3, 5)
    prod = G.mul(g, h)
    assert crt_split(prod, 3, 5) == (HeisGroup(3, 1).mul(gp, hp), HeisGroup(5, 1).mul(gq, hq))


def test_mixing_groups_refused():
    with pytest.raises(GroupMismatch):
        HeisGroup(3, 1).mul(HeisGroup(3, 1).identity, HeisGroup(5, 1).identity)
    with pytest.raises(ValueError):
        HeisGroup(1, 1)


def brute_gsp2(n):
    """Count 2x2 matrices over Z/n with M^T J M = m J, m a unit; for g = 1 this is GL_2."""
    count = 0
    for a, b, c, d in itertools.product(range(n), repeat=4):
        if math.gcd(a * d - b * c, n) == 1:
            count += 1
    return count


@pytest.mark.parametrize("n", [3, 5, 9, 15])
def test_gsp_order_genus_one_brute_force(n):
    assert gsp_order(1, n) == brute_gsp2(n)


def test_gsp_order_genus_two_known():
    # |Sp_4(F_3)| = 51840, similitude factor group of order 2
    assert gsp_order(2, 3) == 51840 * 2
    assert gsp_order(2, 5) == 5**4 * (5**2 - 1) * (5**4 - 1) * 4
