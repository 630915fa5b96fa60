import copy
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from heistorsor.arith.integers import squarefree_part_rational
from heistorsor.specialization.pipeline import (
    SSet,
    census_from_records,
    class_group_rank,
    connectedness_test,
    enumerate_points,
    run_specialization,
    specialize,
    unramified_and_split_tests,
)
from heistorsor.specialization.quadratic import QuadElt, valuation_profile

S3 = SSet.of([3])


@pytest.fixture(scope="module")
def records30(bundle3):
    return run_specialization(bundle3, 30, S3)


def family_f(bundle):
    return bundle["kummer_L"][0].model.even.f


def test_enumerate_points_height_one(bundle3):
    # f(0) = 4 is a square, f(1) = 0, f(-1) = 10
    assert list(enumerate_points(family_f(bundle3), 1)) == [Fraction(-1)]


def test_enumerate_points_order_and_uniqueness(bundle3):
    xs = list(enumerate_points(family_f(bundle3), 12))
    assert len(xs) == len(set(xs))
    heights = [max(abs(x.numerator), x.denominator) for x in xs]
    assert heights == sorted(heights)
    assert Fraction(3, 2) in xs


def test_worked_example(bundle3):
    rec = specialize(bundle3, Fraction(3, 2), S3)
    assert rec.fx0 == Fraction(-95, 64)
    assert rec.field.d == -95
    # closed form (x^3 - 5/2 - y)/(-3/2) at x = 3/2, y = sqrt(-95)/8
    assert rec.alphas[0] == QuadElt(Fraction(-7, 12), Fraction(1, 12), -95)


@given(st.integers(-40, 40), st.integers(1, 40))
@settings(max_examples=25)
def test_collapsed_and_factored_evaluation_agree(bundle3, a, b):
    x0 = Fraction(a, b)
    f = family_f(bundle3)
    if x0 == 1 or f(x0) == 0:
        return
    d, s = squarefree_part_rational(f(x0))
    if d == 1:
        return
    y0 = QuadElt(0, s, d)
    for h in bundle3["kummer_L"] + bundle3["kummer_Lp"]:
        try:
            fast = h.at_even_point(x0, y0)
        except ArithmeticError:
            continue
        assert fast == h.at_even_point_factored(x0, y0)


def test_records_are_json_and_deterministic(bundle3, records30):
    again = run_specialization(bundle3, 30, S3)
    assert json.dumps(records30) == json.dumps(again)
    for r in records30:
        for key in ("x0", "f_x0"):
            assert isinstance(r[key], str)


def test_nth_power_ambiguity_does_not_change_verdicts(bundle3, records30):
    gamma = QuadElt(Fraction(5, 7), Fraction(2, 3), 1)
    n = 3
    checked = 0
    for r in records30[:40]:
        x0 = Fraction(r["x0"])
        rec = specialize(bundle3, x0, S3)
        if rec.profile is None or not rec.profile.complete:
            continue
        g = QuadElt(gamma.a, gamma.b, rec.field.d)
        twisted = copy.copy(rec)
        twisted.alphas = [al * g**n for al in rec.alphas]
        twisted.profile = valuation_profile(twisted.alphas, rec.field, sorted(S3.primes))
        twisted.split_detail = {}
        assert unramified_and_split_tests(twisted, S3, n) == (rec.unramified_outside_S, rec.split_at_S)
        assert connectedness_test(twisted, n) == rec.connected
        checked += 1
    assert checked > 20


def test_connectedness_fails_for_repeated_alpha(bundle3):
    rec = specialize(bundle3, Fraction(3, 2), S3)
    rec.alphas = [rec.alphas[0], rec.alphas[0]]
    rec.profile = valuation_profile(rec.alphas, rec.field, [3])
    assert connectedness_test(rec, 3) is False


def test_unknown_under_tiny_effort(bundle3):
    rec = specialize(bundle3, Fraction(-181, 197), S3, trial_bound=3, rho_iterations=1)
    assert "incomplete-factorization" in rec.flags
    assert rec.unramified_outside_S is None and rec.split_at_S is None and rec.connected is None
    assert not rec.all_true


def test_all_true_imaginary_records_carry_a_rank(bundle3, records30):
    for r in records30:
        if r["unramified_outside_S"] and r["split_at_S"] and r["connected"] and r["field"]["signature"] == "imaginary":
            assert r["class_group"] is not None
            rec = specialize(bundle3, Fraction(r["x0"]), S3)
            assert class_group_rank(rec) >= 2


def test_census_monotone_deduplicated_deterministic(records30):
    grid = [10**k for k in range(2, 13)]
    rep = census_from_records(records30, grid, 2)
    counts = [c for _, c in rep.grid]
    assert counts == sorted(counts)
    ds = [e["d"] for e in rep.fields]
    assert len(ds) == len(set(ds))
    assert rep.benchmark_exponent == Fraction(1, 10)
    doubled = census_from_records(records30 + records30, grid, 2)
    assert doubled.to_json() == rep.to_json()


def test_sset():
    S = SSet.of([3, 5])
    assert S.contains_divisors_of(15) and not S.contains_divisors_of(21)
    assert S.to_json() == {"primes": ["3", "5"], "archimedean": True}
