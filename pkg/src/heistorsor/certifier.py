"""Existence certificates for Heisenberg torsors and the explicit Kummer layer.

A spec lists classes L_1..L_d, L'_1..L'_d of order n on a curve with a rational
Weierstrass point P0. The certificate records, at several good primes
p = 1 (mod n), the discrete log of prod e_n(L_i, L'_i); whether the 2d classes
are independent; and for every class a function h with div h = n*D_L and
h(P0) = 1.

Only the checkable conditions are certified. Defining equations of the
nonabelian cover are never produced.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from heistorsor.heisenberg import HeisGroup
from heistorsor.jacobian.curve import (
    INF,
    FamilyParams,
    OddModel,
    family_curve,
    good_primes,
)
from heistorsor.jacobian.mumford import (
    FunctionProduct,
    MumfordDivisor,
    add,
    audit,
    has_exact_order,
    miller,
    point_divisor,
)
from heistorsor.jacobian.torsion import torsion_search
from heistorsor.pairing import DEFAULT_BUDGET, AffineRep, weil_pairing

CONNECTED = "certified-connected"
CERTIFIED = "certified"
REFUSED = "refused"
ABSTRACT_TRIVIAL = "pairing-trivial-abstract"
MIN_PRIMES = 3


class CertificationError(RuntimeError):
    pass


class UncertifiedSpec(ValueError):
    pass


@dataclass
class TorsorSpec:
    model: OddModel | None  # None in abstract mode
    n: int
    L: list[MumfordDivisor]
    Lp: list[MumfordDivisor]
    labels: list[str] = field(default_factory=list)
    reps: list[AffineRep | None] = field(default_factory=list)
    family: FamilyParams | None = None

    def __post_init__(self):
        if len(self.L) != len(self.Lp) or not self.L:
            raise ValueError("need d >= 1 classes L and the same number L'")
        for D in self.L + self.Lp:
            if not has_exact_order(D, self.n) and not D.is_zero():
                # classes must be n-torsion; exact order is not required
                from heistorsor.jacobian.mumford import scalar_mul

                if not scalar_mul(self.n, D).is_zero():
                    raise ValueError("spec class is not n-torsion")

    @property
    def d(self) -> int:
        return len(self.L)

    @property
    def abstract(self) -> bool:
        return self.L[0].curve.p is not None

    @property
    def p0(self):
        return (self.model.x_w, 0) if self.model is not None else None


def family_spec(params: FamilyParams, d: int = 1, dependent: bool = False) -> TorsorSpec:
    """Spec from the torsion search; ``dependent`` uses L' = L as a control."""
    if d != 1:
        raise ValueError("the family provides one pair (d = 1)")
    res = torsion_search(family_curve(params), params.n)
    c1, c2 = res.classes
    M = res.model
    reps = [_point_rep(M, c.plus, c.minus) for c in (c1, c2)]
    if dependent:
        return TorsorSpec(M, params.n, [c1.divisor], [c1.divisor], [c1.label, c1.label], [reps[0], reps[0]], params)
    return TorsorSpec(M, params.n, [c1.divisor], [c2.divisor], [c1.label, c2.label], reps, params)


def _point_rep(M: OddModel, P, Q) -> AffineRep | None:
    a, b = M.point_to_odd(P), M.point_to_odd(Q)
    if a == INF or b == INF:
        return None
    return AffineRep(point_divisor(M.odd, *a), point_divisor(M.odd, *b))


# -- Kummer functions ------------------------------------------------------------------


@dataclass
class KummerFunction:
    """h with div h = n*(E_A - E_B) on the odd model, normalised so that h(P0) = 1."""

    model: OddModel
    n: int
    fn: FunctionProduct
    rep: AffineRep
    label: str = ""
    _collapsed: tuple | None = None

    @property
    def normalizer(self):
        return self.fn.scalar

    def audit(self) -> dict:
        return audit(self.fn, self.n, self.rep.A, self.rep.B)

    def value_at_p0(self):
        return self.fn.value_at_infinity()

    def collapsed(self):
        if self._collapsed is None:
            self._collapsed = self.fn.collapse()
        return self._collapsed

    def at_even_point(self, x0, y0):
        """h at the even-model point (x0, y0); y0 may be a quadratic-field element."""
        g = self.model.genus
        X0 = 1 / (Fraction(x0) - self.model.x_w)
        P, Q, R = self.collapsed()
        den = R(X0)
        if den == 0:
            from heistorsor.jacobian.mumford import SupportCollision

            raise SupportCollision("denominator vanishes at the point")
        return (P(X0) + Q(X0) * (y0 * X0 ** (g + 1))) * (1 / den)

    def at_even_point_factored(self, x0, y0):
        g = self.model.genus
        X0 = 1 / (Fraction(x0) - self.model.x_w)
        return self.fn.eval_point(X0, y0 * X0 ** (g + 1))

    def to_json(self) -> dict:
        return {"label": self.label, "n": str(self.n), **self.fn.to_json(), "normalizer": str(self.fn.scalar), "rep": {"A": self.rep.A.to_json(), "B": self.rep.B.to_json()}}


def kummer_function(model: OddModel, rep: AffineRep, n: int, label: str = "") -> KummerFunction:
    """Factored h with div h = n*E_A - n*E_B, scaled so h(P0) = 1 (P0 = infinity of the odd model)."""
    if rep.A.degree != rep.B.degree:
        raise ValueError("representative must be E_A - E_B with equal degrees")
    RA, fA = miller(n, rep.A)
    RB, fB = miller(n, rep.B)
    if RA != RB:
        raise ValueError("class is not n-torsion")
    h = fA / fB
    if h.order_at_infinity() != 0:
        raise ArithmeticError("unexpected zero or pole at P0")
    v = h.value_at_infinity()
    h.scalar = h.scalar / v
    return KummerFunction(model, n, h, rep, label)


# -- certification ---------------------------------------------------------------------------


@dataclass
class TorsorCertificate:
    verdict: str
    n: int
    d: int
    primes: list[dict]
    independent: dict
    connected: bool
    kummer: list[KummerFunction]
    refusal: dict | None = None
    spec: TorsorSpec | None = None

    def to_json(self) -> dict:
        spec = self.spec
        out: dict = {}
        if spec is not None and spec.family is not None:
            out["curve"] = {
                "n": str(spec.family.n),
                "lambda": str(spec.family.lam),
                "f": [str(c) for c in spec.model.even.f.c],
            }
            out["p0"] = [str(spec.model.x_w), "0"]
        elif spec is not None:
            C = spec.L[0].curve
            out["curve"] = {"p": str(C.p), "f": [str(c) for c in C.f.c]}
            out["p0"] = None
        if spec is not None:
            out["classes"] = [
                {"label": lab, "role": role, **D.to_json()}
                for lab, role, D in zip(
                    spec.labels or [""] * (2 * spec.d),
                    ["L"] * spec.d + ["L'"] * spec.d,
                    spec.L + spec.Lp,
                )
            ]
        out["n"] = str(self.n)
        out["d"] = str(self.d)
        out["primes"] = self.primes
        out["independent"] = self.independent
        out["verdict"] = self.verdict
        out["connected"] = self.connected
        out["refusal"] = self.refusal
        out["kummer"] = [k.to_json() for k in self.kummer]
        return out


def _pair_logs(spec: TorsorSpec, p: int, seed: int, budget: int = DEFAULT_BUDGET) -> dict:
    n = spec.n
    if spec.abstract:
        L, Lp = spec.L, spec.Lp
    else:
        Mp = spec.model.reduce_mod_p(p, n)
        L = [D.reduce_mod_p(Mp.odd) for D in spec.L]
        Lp = [D.reduce_mod_p(Mp.odd) for D in spec.Lp]
    rng = random.Random(seed * 1_000_003 + p)
    logs = [weil_pairing(a, b, n, rng, budget).log for a, b in zip(L, Lp)]
    return {"p": str(p), "logs": [str(x) for x in logs], "product_log": str(sum(logs) % n)}


def certify(
    spec: TorsorSpec,
    primes: list[int] | None = None,
    seed: int = 0,
    kummer: bool = True,
    prime_bound: int = 10_000,
    budget: int = DEFAULT_BUDGET,
) -> TorsorCertificate:
    n = spec.n
    if spec.abstract:
        primes = [spec.L[0].curve.p]
    elif primes is None:
        primes = good_primes(spec.model, n, MIN_PRIMES, congruent_one=True, bound=prime_bound)
        if len(primes) < MIN_PRIMES:
            raise CertificationError(f"fewer than {MIN_PRIMES} good primes below {prime_bound}")
    else:
        for p in primes:
            if p % n != 1:
                raise CertificationError(f"p={p} is not 1 mod {n}")
            spec.model.reduce_mod_p(p, n)  # raises BadPrime
    checks = [_pair_logs(spec, p, seed, budget) for p in sorted(primes)]
    refusal = next(({"p": c["p"], "product_log": c["product_log"]} for c in checks if c["product_log"] != "0"), None)

    # independence of all 2d classes at the first prime
    witness = sorted(primes)[0]
    if spec.abstract:
        classes = spec.L + spec.Lp
    else:
        Mp = spec.model.reduce_mod_p(witness, n)
        classes = [D.reduce_mod_p(Mp.odd) for D in spec.L + spec.Lp]
    if len(set(classes)) < len(classes):
        indep = False
    else:
        indep = _independent(classes, n)

    if refusal is not None:
        verdict = REFUSED
    elif spec.abstract:
        verdict = ABSTRACT_TRIVIAL
    elif len(checks) < MIN_PRIMES:
        raise CertificationError("not enough primes for a certificate")
    else:
        verdict = CONNECTED if indep else CERTIFIED
    kfs: list[KummerFunction] = []
    if kummer and not spec.abstract and verdict != REFUSED:
        for i, D in enumerate(spec.L + spec.Lp):
            rep = spec.reps[i] if i < len(spec.reps) and spec.reps[i] is not None else rational_representative(spec.model, D)
            label = spec.labels[i] if i < len(spec.labels) else ""
            kfs.append(kummer_function(spec.model, rep, n, label))
    return TorsorCertificate(
        verdict,
        n,
        spec.d,
        checks,
        {"verdict": indep, "witness_prime": str(witness)},
        verdict == CONNECTED,
        kfs,
        refusal,
        spec,
    )


def _independent(classes: list[MumfordDivisor], n: int) -> bool:
    from heistorsor.jacobian.mumford import scalar_mul

    C = classes[0].curve
    for coeffs in itertools.product(range(n), repeat=len(classes)):
        if not any(coeffs):
            continue
        acc = C.zero()
        for c, D in zip(coeffs, classes):
            if c:
                acc = add(acc, scalar_mul(c, D))
        if acc.is_zero():
            return False
    return True


def rational_representative(model: OddModel, D: MumfordDivisor, height: int = 3) -> AffineRep:
    """E_A - E_B ~ D over Q with both parts affine, using sums of small rational points for E_B."""
    from heistorsor.jacobian.torsion import small_rational_points

    pts = []
    for P in small_rational_points(model.even, height):
        img = model.point_to_odd(P)
        if img != INF:
            pts.append(point_divisor(model.odd, *img))
    for k in range(1, model.genus + 1):
        for combo in itertools.combinations(pts, k):
            B = model.odd.zero()
            for P in combo:
                B = add(B, P)
            if B.degree != k:
                continue
            A = add(D, B)
            if A.degree == k and A.u.gcd(B.u).deg == 0:
                return AffineRep(A, B)
    raise CertificationError("no affine rational representative found")


def heis_data(cert: TorsorCertificate) -> dict:
    if cert.verdict not in (CONNECTED, CERTIFIED):
        raise UncertifiedSpec(f"verdict {cert.verdict}: no Heisenberg data")
    d = cert.d
    return {
        "certificate": cert,
        "kummer_L": cert.kummer[:d],
        "kummer_Lp": cert.kummer[d:],
        "group": HeisGroup(cert.n, d),
        "group_descriptor": {"name": f"Heis_{2 * d + 1}(mu_{cert.n})", "n": cert.n, "d": d, "order": cert.n ** (2 * d + 1)},
        "cover_equations": None,
        "note": "existence of the Heisenberg torsor is certified; its defining equations are not produced",
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)
