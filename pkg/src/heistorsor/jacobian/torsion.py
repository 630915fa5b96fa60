"""Discovery and certification of rational n-torsion classes on the lambda-family."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from heistorsor.arith.integers import rational_nth_root
from heistorsor.jacobian.curve import (
    INF_MINUS,
    INF_PLUS,
    CurveError,
    HyperellipticCurve,
    OddModel,
    good_primes,
    seed_identity_holds,
    to_odd_model,
)
from heistorsor.jacobian.mumford import (
    MumfordDivisor,
    add,
    has_exact_order,
    neg,
    point_divisor,
    scalar_mul,
)


class TorsionSearchExhausted(RuntimeError):
    pass


@dataclass
class TorsionCandidate:
    label: str
    plus: object  # even-model point
    minus: object
    divisor: MumfordDivisor


@dataclass
class TorsionResult:
    model: OddModel
    n: int
    classes: list[TorsionCandidate]
    seed_identity: bool
    independence_prime: int | None
    log: list[str] = field(default_factory=list)


def small_rational_points(C: HyperellipticCurve, height: int) -> list:
    """Affine points (x, y) with x = a/b, max(|a|, b) <= height, y rational; plus rational points at infinity."""
    pts = []
    seen = set()
    for b in range(1, height + 1):
        for a in range(-height, height + 1):
            if math.gcd(a, b) != 1:
                continue
            x = Fraction(a, b)
            if x in seen:
                continue
            seen.add(x)
            y = rational_nth_root(C.f(x), 2)
            if y is None:
                continue
            pts.append((x, y))
            if y != 0:
                pts.append((x, -y))
    if rational_nth_root(C.f.lc, 2) is not None:
        pts += [INF_PLUS, INF_MINUS]
    return pts


def _odd_class_of_difference(M: OddModel, P, Q) -> MumfordDivisor:
    """[P - Q] transported to the odd model (P, Q even-model points)."""
    C = M.odd

    def single(R):
        img = M.point_to_odd(R)
        if img == "inf":
            return C.zero()
        return point_divisor(C, *img)

    return add(single(P), neg(single(Q)))


def _label(P) -> str:
    if isinstance(P, str):
        return P
    return f"({P[0]},{P[1]})"


def independent_mod_p(model_p: OddModel, classes: list[MumfordDivisor], n: int) -> bool:
    """All n^k combinations of the reduced classes vanish only for the zero vector."""
    C = model_p.odd
    zero = C.zero()
    for coeffs in itertools.product(range(n), repeat=len(classes)):
        if not any(coeffs):
            continue
        acc = zero
        for c, D in zip(coeffs, classes):
            if c:
                acc = add(acc, scalar_mul(c, D))
        if acc.is_zero():
            return False
    return True


def torsion_search(
    C: HyperellipticCurve,
    n: int,
    want: int = 2,
    height: int = 2,
    prime_bound: int = 500,
) -> TorsionResult:
    """Find ``want`` independent classes of exact order n among point differences.

    The [inf+ - inf-] class is tried first; it is backed by the polynomial identity
    (x^n - s)^2 - f = t^2. The remaining candidates are differences of small-height
    rational points of the even model.
    """
    if C.family is None:
        raise CurveError("torsion_search expects a family curve")
    M = to_odd_model(C, 1)
    log = []
    seed_ok = seed_identity_holds(C.family)
    log.append(f"seed identity (x^n - s)^2 - f = t^2: {seed_ok}")
    pts = small_rational_points(C, height)
    log.append(f"{len(pts)} rational points of height <= {height}")
    cands: list[tuple] = []
    if INF_PLUS in pts:
        cands.append((INF_PLUS, INF_MINUS))
    for P, Q in itertools.combinations(pts, 2):
        if (P, Q) != (INF_PLUS, INF_MINUS):
            cands.append((P, Q))

    primes = good_primes(M, n, 4, congruent_one=True, bound=prime_bound)
    if not primes:
        raise TorsionSearchExhausted("no good prime for the independence check")
    p = primes[0]
    Mp = M.reduce_mod_p(p, n)

    chosen: list[TorsionCandidate] = []
    chosen_p: list[MumfordDivisor] = []
    seen = set()
    for P, Q in cands:
        D = _odd_class_of_difference(M, P, Q)
        if D.is_zero() or D in seen or neg(D) in seen:
            continue
        seen.add(D)
        if not has_exact_order(D, n):
            continue
        try:
            Dp = D.reduce_mod_p(Mp.odd)
        except ValueError:
            continue
        if not independent_mod_p(Mp, chosen_p + [Dp], n):
            log.append(f"[{_label(P)} - {_label(Q)}] has order {n} but is dependent")
            continue
        chosen.append(TorsionCandidate(f"[{_label(P)} - {_label(Q)}]", P, Q, D))
        chosen_p.append(Dp)
        log.append(f"accepted [{_label(P)} - {_label(Q)}]")
        if len(chosen) == want:
            break
    if len(chosen) < want:
        raise TorsionSearchExhausted(f"found {len(chosen)} of {want} independent order-{n} classes")
    return TorsionResult(M, n, chosen, seed_ok, p, log)
