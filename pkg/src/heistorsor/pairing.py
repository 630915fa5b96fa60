"""Weil pairing on J[n] over F_p (p = 1 mod n) through factored Miller functions.

A class D is written as E_A - E_B with E_A, E_B effective, affine and of equal
degree, where E_B comes from a random auxiliary class R and E_A = red(D + R).
Then f_D = f_{n,A} / f_{n,B} has divisor n*E_A - n*E_B and

    e_n(D1, D2) = f_{D1}(E_A2 - E_B2) / f_{D2}(E_A1 - E_B1).

Because both representatives are affine and disjoint, Weil reciprocity holds
exactly and no sign correction enters.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from heistorsor.arith.integers import primitive_root
from heistorsor.arith.poly import Poly
from heistorsor.jacobian.curve import HyperellipticCurve
from heistorsor.jacobian.mumford import (
    FunctionProduct,
    MumfordDivisor,
    SupportCollision,
    add,
    miller,
    neg,
    point_divisor,
    random_class,
    random_class_irreducible,
    scalar_mul,
)

MillerFunction = FunctionProduct
DEFAULT_BUDGET = 200
PROFILE_LIMIT = 10**6


class PairingError(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class AffineRep:
    """E_A - E_B with deg E_A = deg E_B, both affine."""

    A: MumfordDivisor
    B: MumfordDivisor

    def support(self) -> Poly:
        return self.A.u * self.B.u


@dataclass(frozen=True)
class PairingValue:
    value: int
    p: int
    n: int
    log: int | None

    def __post_init__(self):
        if pow(self.value, self.n, self.p) != 1:
            raise PairingError("pairing value is not an n-th root of unity")


def _share_point(D1: MumfordDivisor, D2: MumfordDivisor) -> bool:
    """E(u1, v1) and E(u2, v2) have a common point iff gcd(u1, u2, v1 - v2) is nonconstant."""
    g = D1.u.gcd(D2.u)
    if g.deg <= 0:
        return False
    return g.gcd(D1.v - D2.v).deg > 0


def _disjoint(parts, avoid) -> bool:
    others = []
    for E in avoid:
        others += [E.A, E.B] if isinstance(E, AffineRep) else [E]
    return not any(_share_point(P, Q) for P in parts for Q in others)


def disjoint_representative(
    D: MumfordDivisor | AffineRep,
    avoid=(),
    rng: random.Random | None = None,
    budget: int = DEFAULT_BUDGET,
    draws: list | None = None,
) -> AffineRep:
    """An affine representative E_A - E_B of D whose support misses ``avoid``."""
    if isinstance(D, AffineRep):
        C = D.A.curve
        if _disjoint([D.A, D.B], avoid) and not _share_point(D.A, D.B):
            return D
        D = add(D.A, neg(D.B))
    C = D.curve
    if C.p is None:
        raise PairingError("randomised representatives need a finite field")
    rng = rng or random.Random(0)
    for attempt in range(budget):
        R = random_class_irreducible(C, rng) if attempt % 2 == 0 else random_class(C, rng)
        A = add(D, R)
        if R.degree == 0 or A.degree != R.degree:
            continue
        if _share_point(A, R) or not _disjoint([A, R], avoid):
            continue
        if draws is not None:
            draws.append(R.to_json())
        return AffineRep(A, R)
    raise BudgetExhausted("no disjoint representative within budget")


def miller_function(rep: AffineRep, n: int) -> FunctionProduct:
    """f with div f = n*E_A - n*E_B; needs n*(A - B) = 0."""
    RA, fA = miller(n, rep.A)
    RB, fB = miller(n, rep.B)
    if RA != RB:
        raise PairingError("class is not n-torsion")
    return fA / fB


def miller_eval(f: FunctionProduct, E: AffineRep | None):
    """f(E_A - E_B); the empty divisor gives 1."""
    if E is None:
        return f.curve.ring.convert(1)
    return f.eval_divisor(E.A, E.B)


def _mu_generator(p: int, n: int) -> int:
    return pow(primitive_root(p), (p - 1) // n, p)


def discrete_log_mu(value: int, p: int, n: int) -> int:
    z = _mu_generator(p, n)
    acc = 1
    for k in range(n):
        if acc == value % p:
            return k
        acc = acc * z % p
    raise PairingError(f"{value} is not in mu_{n}(F_{p})")


def weil_pairing(
    D1: MumfordDivisor,
    D2: MumfordDivisor,
    n: int,
    rng: random.Random | None = None,
    budget: int = DEFAULT_BUDGET,
    draws: list | None = None,
) -> PairingValue:
    C = D1.curve
    p = C.p
    if p is None:
        raise PairingError("pairing is computed over F_p only")
    if p % n != 1:
        raise PairingError(f"p={p} is not 1 mod {n}")
    if D2.curve != C:
        raise PairingError("classes on different curves")
    if not scalar_mul(n, D1).is_zero() or not scalar_mul(n, D2).is_zero():
        raise PairingError("inputs are not n-torsion")
    if D1.is_zero() or D2.is_zero() or D1 == D2:
        return PairingValue(1, p, n, 0)
    rng = rng or random.Random(0)
    for _ in range(budget):
        r1 = disjoint_representative(D1, (), rng, budget, draws)
        r2 = disjoint_representative(D2, (r1,), rng, budget, draws)
        try:
            f1 = miller_function(r1, n)
            f2 = miller_function(r2, n)
            val = miller_eval(f1, r2) * pow(miller_eval(f2, r1), -1, p) % p
        except SupportCollision:
            continue
        return PairingValue(val, p, n, discrete_log_mu(val, p, n))
    raise BudgetExhausted("pairing evaluation kept colliding")


def frobenius(D: MumfordDivisor) -> MumfordDivisor:
    """Coefficientwise p-th power; the identity on F_p-rational classes."""
    p = D.curve.p
    R = D.curve.ring
    return MumfordDivisor(D.curve, Poly([pow(c, p, p) for c in D.u.c], R), Poly([pow(c, p, p) for c in D.v.c], R))


@dataclass
class PairingProfile:
    p: int
    n: int
    logs: list[list[int]]
    independent: bool
    combinations_checked: int
    draws: list = field(default_factory=list)


def pairing_profile(classes: list[MumfordDivisor], n: int, rng: random.Random | None = None) -> PairingProfile:
    """Pairing log matrix plus an independence verdict from the exhaustive combination check."""
    if not classes:
        raise PairingError("no classes")
    C = classes[0].curve
    k = len(classes)
    if n**k > PROFILE_LIMIT:
        raise BudgetExhausted(f"{n}^{k} combinations exceed the budget")
    rng = rng or random.Random(0)
    draws: list = []
    logs = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            e = weil_pairing(classes[i], classes[j], n, rng, draws=draws)
            logs[i][j] = e.log
            logs[j][i] = (-e.log) % n
    independent = True
    checked = 0
    for coeffs in itertools.product(range(n), repeat=k):
        checked += 1
        if not any(coeffs):
            continue
        acc = C.zero()
        for c, D in zip(coeffs, classes):
            if c:
                acc = add(acc, scalar_mul(c, D))
        if acc.is_zero():
            independent = False
            break
    return PairingProfile(C.p, n, logs, independent, checked, draws)


# -- a genus-1 toy with full rational 3-torsion ---------------------------------------


def toy_full_torsion_curve(p: int = 7, n: int = 3) -> tuple[HyperellipticCurve, list[MumfordDivisor]]:
    """First y^2 = x^3 + a x + b over F_p (lexicographic in (a, b)) with E[n] inside E(F_p).

    Returns the curve and a basis of E[n].
    """
    from heistorsor.arith.modular import GF
    from heistorsor.jacobian.curve import CurveError
    from heistorsor.jacobian.mumford import all_points

    R = GF(p)
    for a in range(p):
        for b in range(p):
            try:
                C = HyperellipticCurve(Poly([b, a, 0, 1], R))
            except CurveError:
                continue
            pts = [C.zero() if P == "inf" else point_divisor(C, *P) for P in all_points(C)]
            tors = [D for D in pts if scalar_mul(n, D).is_zero()]
            if len(tors) != n * n:
                continue
            P1 = next(D for D in tors if not D.is_zero())
            span = {scalar_mul(i, P1) for i in range(n)}
            P2 = next(D for D in tors if D not in span)
            return C, [P1, P2]
    raise ArithmeticError(f"no curve over F_{p} with full {n}-torsion")
