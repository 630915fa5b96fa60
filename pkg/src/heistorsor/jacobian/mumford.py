"""Mumford representation and Cantor's algorithm on an odd-degree model.

Every group operation can optionally return the function it divided out, so
that D1 + D2 = D3 + div(h). Functions are kept as products of factors
a(X) + b(X)*Y raised to integer exponents (``FunctionProduct``); multiplying
them out would blow up degrees.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from heistorsor.arith.integers import sqrt_mod_prime
from heistorsor.arith.poly import Poly
from heistorsor.jacobian.curve import INF, CurveError, HyperellipticCurve


class CorruptDivisor(ValueError):
    pass


class SupportCollision(ArithmeticError):
    """A factor vanishes at the evaluation divisor."""


class MumfordDivisor:
    __slots__ = ("curve", "u", "v")

    def __init__(self, curve: HyperellipticCurve, u: Poly, v: Poly, check: bool = True):
        if not curve.odd:
            raise CurveError("Mumford arithmetic needs the odd-degree model")
        self.curve = curve
        if check:
            if u.is_zero() or u.lc != 1:
                raise CorruptDivisor("u must be monic")
            v = v % u if u.deg > 0 else Poly((), curve.ring)
            if not u.divides(v * v - curve.f):
                raise CorruptDivisor("u does not divide v^2 - f")
        self.u = u
        self.v = v

    @property
    def degree(self) -> int:
        return self.u.deg

    def is_zero(self) -> bool:
        return self.u.deg == 0

    def is_reduced(self) -> bool:
        return self.u.deg <= self.curve.genus

    def reduced(self) -> MumfordDivisor:
        return reduce_divisor(self)[0]

    def __eq__(self, other):
        if not isinstance(other, MumfordDivisor):
            return NotImplemented
        return self.curve == other.curve and self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.u, self.v))

    def __repr__(self):
        return f"<{self.u}, {self.v}>"

    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return neg(self)

    def __sub__(self, other):
        return add(self, neg(other))

    def __rmul__(self, k: int):
        return scalar_mul(k, self)

    def reduce_mod_p(self, curve_p: HyperellipticCurve) -> MumfordDivisor:
        """Coefficientwise reduction; u and v must be p-integral."""
        R = curve_p.ring
        try:
            u, v = self.u.change_ring(R), self.v.change_ring(R)
        except ZeroDivisionError as exc:
            raise ValueError(f"divisor is not integral at p={curve_p.p}") from exc
        if u.deg != self.u.deg:
            raise ValueError("leading coefficient of u vanishes mod p")
        return MumfordDivisor(curve_p, u, v)

    def to_json(self) -> dict:
        return {"u": [str(c) for c in self.u.c], "v": [str(c) for c in self.v.c]}


DivisorClass = MumfordDivisor


def zero_divisor(C: HyperellipticCurve) -> MumfordDivisor:
    R = C.ring
    return MumfordDivisor(C, Poly.const(1, R), Poly((), R), check=False)


HyperellipticCurve.zero = zero_divisor  # type: ignore[attr-defined]


def point_divisor(C: HyperellipticCurve, x, y) -> MumfordDivisor:
    """[P - inf] for an affine point P = (x, y)."""
    R = C.ring
    return MumfordDivisor(C, Poly((-R.convert(x), 1), R), Poly.const(y, R))


def from_json(C: HyperellipticCurve, data: dict) -> MumfordDivisor:
    from fractions import Fraction

    conv = (lambda s: int(s)) if C.p is not None else (lambda s: Fraction(s))
    return MumfordDivisor(C, Poly([conv(c) for c in data["u"]], C.ring), Poly([conv(c) for c in data["v"]], C.ring))


# -- factored functions -------------------------------------------------------------


def _key(a: Poly, b: Poly) -> tuple:
    return (a.c, b.c)


@dataclass
class FunctionProduct:
    """scalar * prod (a_i + b_i Y)^(e_i) on y^2 = F; factors normalised to leading coeff 1."""

    curve: HyperellipticCurve
    factors: dict = field(default_factory=dict)
    scalar: object = 1

    def __post_init__(self):
        self.scalar = self.curve.ring.convert(self.scalar)

    # -- construction ----------------------------------------------------------------
    def copy(self) -> FunctionProduct:
        return FunctionProduct(self.curve, dict(self.factors), self.scalar)

    def add_factor(self, a: Poly, b: Poly, e: int = 1) -> FunctionProduct:
        R = self.curve.ring
        if b.is_zero():
            if a.is_zero():
                raise ZeroDivisionError("zero function")
            lead = a.lc
        else:
            lead = b.lc
        if lead != 1:
            inv = R.inv(lead)
            a, b = a * inv, b * inv
            self.scalar = _mulpow(self.scalar, lead, e, R)
        if a.deg <= 0 and b.is_zero():
            return self
        k = _key(a, b)
        self.factors[k] = self.factors.get(k, 0) + e
        if self.factors[k] == 0:
            del self.factors[k]
        return self

    def __mul__(self, other: FunctionProduct) -> FunctionProduct:
        out = self.copy()
        for k, e in other.factors.items():
            out.factors[k] = out.factors.get(k, 0) + e
            if out.factors[k] == 0:
                del out.factors[k]
        out.scalar = out.scalar * other.scalar
        return out._fix()

    def __pow__(self, k: int) -> FunctionProduct:
        R = self.curve.ring
        out = FunctionProduct(self.curve, {key: e * k for key, e in self.factors.items() if e * k}, 1)
        out.scalar = _mulpow(R.convert(1), self.scalar, k, R)
        return out

    def inverse(self) -> FunctionProduct:
        return self ** -1

    def __truediv__(self, other: FunctionProduct) -> FunctionProduct:
        return self * other.inverse()

    def _fix(self):
        m = getattr(self.curve.ring, "m", None)
        if m is not None:
            self.scalar %= m
        return self

    def items(self):
        R = self.curve.ring
        for (ac, bc), e in self.factors.items():
            yield Poly(ac, R, _raw=True), Poly(bc, R, _raw=True), e

    def __len__(self):
        return len(self.factors)

    # -- evaluation --------------------------------------------------------------------
    def eval_effective(self, u: Poly, v: Poly, include_scalar: bool = False):
        """Product of values over the points of E(u, v); raises SupportCollision on a zero."""
        R = self.curve.ring
        one = R.convert(1)
        num, den = one, one
        for a, b, e in self.items():
            val = _factor_at(a, b, u, v)
            if val == 0:
                raise SupportCollision("factor vanishes on the evaluation divisor")
            if e > 0:
                num = num * _power(val, e, one, R)
            else:
                den = den * _power(val, -e, one, R)
        out = num * R.inv(den)
        if include_scalar:
            out = out * _power(self.scalar, u.deg, one, R)
        return _red(out, R)

    def eval_divisor(self, A: MumfordDivisor, B: MumfordDivisor):
        """f(E_A - E_B) for effective divisors of equal degree (scalar cancels)."""
        if A.degree != B.degree:
            raise ValueError("evaluation divisor must have degree 0 affinely")
        R = self.curve.ring
        return _red(self.eval_effective(A.u, A.v) * R.inv(self.eval_effective(B.u, B.v)), R)

    def eval_point(self, X, Y):
        """Value at an affine point (scalar included); SupportCollision on any vanishing factor."""
        m = getattr(self.curve.ring, "m", None)
        num = den = 1
        for a, b, e in self.items():
            val = a(X) + b(X) * Y
            if m is not None:
                val %= m
            if val == 0:
                raise SupportCollision("factor vanishes at the point")
            if e > 0:
                num = num * val**e
            else:
                den = den * val ** (-e)
        if m is None:
            return self.scalar * num / den
        return self.scalar * num * pow(den, -1, m) % m

    def order_at_infinity(self) -> int:
        g = self.curve.genus
        total = 0
        for a, b, e in self.items():
            total += e * _inf_order(a, b, g)
        return total

    def value_at_infinity(self):
        """Leading coefficient in t = X^g / Y; equals the value when the order at infinity is 0."""
        R = self.curve.ring
        c = self.curve.f.lc
        g = self.curve.genus
        one = R.convert(1)
        num, den = self.scalar, one
        for a, b, e in self.items():
            if b.is_zero() or (not a.is_zero() and 2 * a.deg > 2 * b.deg + 2 * g + 1):
                lead, k = a.lc, a.deg
            else:
                lead, k = b.lc, b.deg + g
            # X ~ c^-1 t^-2, Y ~ c^-g t^(-2g-1)
            val = lead * _power(R.inv(c), k, one, R)
            if e > 0:
                num = num * _power(val, e, one, R)
            else:
                den = den * _power(val, -e, one, R)
        return _red(num * R.inv(den), R)

    def reduce_mod_p(self, curve_p: HyperellipticCurve) -> FunctionProduct:
        R = curve_p.ring
        out = FunctionProduct(curve_p, {}, R.convert(self.scalar))
        for a, b, e in self.items():
            ap, bp = a.change_ring(R), b.change_ring(R)
            if (b.is_zero() and ap.deg != a.deg) or (not b.is_zero() and bp.deg != b.deg):
                raise ValueError("factor degenerates mod p")
            out.add_factor(ap, bp, e)
        return out

    def to_json(self) -> dict:
        return {
            "scalar": str(self.scalar),
            "factors": [
                {"a": [str(x) for x in ac], "b": [str(x) for x in bc], "e": str(e)}
                for (ac, bc), e in sorted(self.factors.items(), key=lambda kv: repr(kv[0]))
            ],
        }

    @classmethod
    def from_json(cls, curve: HyperellipticCurve, data: dict) -> FunctionProduct:
        from fractions import Fraction

        conv = (lambda s: int(s)) if curve.p is not None else (lambda s: Fraction(s))
        out = cls(curve, {}, conv(data["scalar"]))
        for fa in data["factors"]:
            out.add_factor(Poly([conv(x) for x in fa["a"]], curve.ring), Poly([conv(x) for x in fa["b"]], curve.ring), int(fa["e"]))
        return out

    def collapse(self) -> tuple[Poly, Poly, Poly]:
        """(P, Q, R) with f = (P + Q Y) / R as an element of the function field."""
        F = self.curve.f
        Rg = self.curve.ring
        P, Q, D = Poly.const(self.scalar, Rg), Poly((), Rg), Poly.const(1, Rg)
        for a, b, e in self.items():
            if e < 0:
                norm = a * a - b * b * F
                a, b = a, -b
                D = D * norm ** (-e)
                e = -e
            for _ in range(e):
                P, Q = P * a + Q * b * F, P * b + Q * a
        if Rg.is_field:
            g = P.gcd(Q).gcd(D) if not Q.is_zero() else P.gcd(D)
            if g.deg > 0:
                P, Q, D = P // g, Q // g, D // g
        return P, Q, D


def _inf_order(a: Poly, b: Poly, g: int) -> int:
    if b.is_zero():
        return -2 * a.deg
    if a.is_zero():
        return -(2 * b.deg + 2 * g + 1)
    return -max(2 * a.deg, 2 * b.deg + 2 * g + 1)


def _factor_at(a: Poly, b: Poly, u: Poly, v: Poly):
    """prod over the points of E(u, v) of a + b*y, i.e. Res(u, a + b v mod u)."""
    R = u.ring
    if u.deg <= 0:
        return R.convert(1)
    w = (a + b * v) % u
    if w.is_zero():
        return R.convert(0)
    return u.resultant(w)


def _power(x, k, one, R):
    m = getattr(R, "m", None)
    if m is not None:
        return pow(x, k, m)
    return x**k if k else one


def _mulpow(acc, x, k, R):
    m = getattr(R, "m", None)
    if m is not None:
        return acc * pow(x, k, m) % m
    return acc * x**k


def _red(x, R):
    m = getattr(R, "m", None)
    return x % m if m is not None else x


# -- Cantor's algorithm ------------------------------------------------------------------


def _same_curve(D1: MumfordDivisor, D2: MumfordDivisor):
    if D1.curve != D2.curve:
        raise CurveError("divisors on different curves")


def compose(D1: MumfordDivisor, D2: MumfordDivisor) -> tuple[Poly, Poly, Poly]:
    """(u, v, d) with E1 + E2 = E(u, v) + div(d); (u, v) semi-reduced."""
    _same_curve(D1, D2)
    f = D1.curve.f
    u1, v1, u2, v2 = D1.u, D1.v, D2.u, D2.v
    d0, e1, e2 = u1.xgcd(u2)
    if d0.deg == 0:
        d, s1, s2, s3 = d0, e1, e2, Poly((), f.ring)
    else:
        d, c1, s3 = d0.xgcd(v1 + v2)
        s1, s2 = c1 * e1, c1 * e2
    u = (u1 * u2).exact_div(d * d)
    v = (s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + f)).exact_div(d) % u if u.deg > 0 else Poly((), f.ring)
    return u, v, d


def reduce_divisor(D: MumfordDivisor, fn: FunctionProduct | None = None):
    """Reduce to deg u <= g; each step multiplies ``fn`` by (Y - v) / u'."""
    C = D.curve
    u, v = D.u, D.v
    while u.deg > C.genus:
        u2 = (C.f - v * v).exact_div(u).monic()
        v2 = (-v) % u2 if u2.deg > 0 else Poly((), C.ring)
        if fn is not None:
            fn.add_factor(-v, Poly.const(1, C.ring), 1)
            fn.add_factor(u2, Poly((), C.ring), -1)
        u, v = u2, v2
    return MumfordDivisor(C, u, v, check=False), fn


def add(D1: MumfordDivisor, D2: MumfordDivisor, track: bool = False):
    u, v, d = compose(D1, D2)
    fn = None
    if track:
        fn = FunctionProduct(D1.curve)
        if d.deg > 0:
            fn.add_factor(d, Poly((), d.ring), 1)
    D, fn = reduce_divisor(MumfordDivisor(D1.curve, u, v, check=False), fn)
    return (D, fn) if track else D


def neg(D: MumfordDivisor) -> MumfordDivisor:
    """Hyperelliptic involution: (u, v) -> (u, -v)."""
    return MumfordDivisor(D.curve, D.u, -D.v, check=False)


def scalar_mul(k: int, D: MumfordDivisor) -> MumfordDivisor:
    if k < 0:
        return scalar_mul(-k, neg(D))
    out = zero_divisor(D.curve)
    base = D
    while k:
        if k & 1:
            out = add(out, base)
        k >>= 1
        if k:
            base = add(base, base)
    return out


def miller(k: int, D: MumfordDivisor) -> tuple[MumfordDivisor, FunctionProduct]:
    """(R, f) with k*D = R + div(f), R reduced; double-and-add from the top bit."""
    if k < 1:
        raise ValueError("k must be positive")
    C = D.curve
    R_, f = D, FunctionProduct(C)
    for bit in bin(k)[3:]:
        R_, h = add(R_, R_, track=True)
        f = (f ** 2) * h
        if bit == "1":
            R_, h = add(R_, D, track=True)
            f = f * h
    return R_, f


def class_order(D: MumfordDivisor, bound: int) -> int | None:
    """Least k <= bound with kD = 0, else None."""
    acc = D
    for k in range(1, bound + 1):
        if acc.is_zero():
            return k
        acc = add(acc, D)
    return None


def order_from_multiple(D: MumfordDivisor, N: int) -> int:
    """Exact order of D given N*D = 0."""
    from heistorsor.arith.integers import factor_int

    if not scalar_mul(N, D).is_zero():
        raise ValueError("N does not kill D")
    order = N
    for p, _ in factor_int(N).items():
        while order % p == 0 and scalar_mul(order // p, D).is_zero():
            order //= p
    return order


def has_exact_order(D: MumfordDivisor, n: int) -> bool:
    from heistorsor.arith.integers import factor_int

    if not scalar_mul(n, D).is_zero():
        return False
    return all(not scalar_mul(n // q, D).is_zero() for q in factor_int(n).primes())


# -- random classes over F_p ---------------------------------------------------------------


def random_point(C: HyperellipticCurve, rng: random.Random, affine_only: bool = True):
    p = C.p
    if p is None:
        raise ValueError("random points only over finite fields")
    while True:
        x = rng.randrange(p)
        fx = C.f(x)
        if fx == 0:
            return (x, 0)
        if pow(fx, (p - 1) // 2, p) == 1:
            y = sqrt_mod_prime(fx, p)
            return (x, y if rng.random() < 0.5 else p - y)


def random_class(C: HyperellipticCurve, rng: random.Random, npoints: int | None = None) -> MumfordDivisor:
    D = zero_divisor(C)
    for _ in range(npoints or C.genus):
        D = add(D, point_divisor(C, *random_point(C, rng)))
    return D


def random_class_irreducible(C: HyperellipticCurve, rng: random.Random, degree: int | None = None) -> MumfordDivisor:
    """Class of a prime divisor of degree ``degree`` (default g): u irreducible, v^2 = F mod u."""
    from heistorsor.arith.poly import sqrt_mod_irreducible

    p = C.p
    if p is None:
        raise ValueError("random classes only over finite fields")
    k = degree or C.genus
    while True:
        u = Poly([rng.randrange(p) for _ in range(k)] + [1], C.ring)
        if not u.is_irreducible():
            continue
        v = sqrt_mod_irreducible(C.f, u, rng)
        if v is None or v.is_zero():
            continue
        if rng.random() < 0.5:
            v = (-v) % u
        return MumfordDivisor(C, u, v)


def all_points(C: HyperellipticCurve) -> list:
    p = C.p
    if p is None:
        raise ValueError("point enumeration only over finite fields")
    pts: list = [INF]
    for x in range(p):
        fx = C.f(x)
        if fx == 0:
            pts.append((x, 0))
        elif pow(fx, (p - 1) // 2, p) == 1:
            y = sqrt_mod_prime(fx, p)
            pts += [(x, y), (x, p - y)]
    return pts


# -- effective divisors and the divisor audit -----------------------------------------------


@dataclass(frozen=True)
class EffectiveDivisor:
    """pure(x) (both sheets over each root) + E(u, v) with (u, v) semi-reduced."""

    pure: Poly
    u: Poly
    v: Poly

    @property
    def degree(self) -> int:
        return 2 * self.pure.deg + self.u.deg


def effective_zero(C: HyperellipticCurve) -> EffectiveDivisor:
    R = C.ring
    one = Poly.const(1, R)
    return EffectiveDivisor(one, one, Poly((), R))


def effective_add(C: HyperellipticCurve, E1: EffectiveDivisor, E2: EffectiveDivisor) -> EffectiveDivisor:
    u, v, d = compose(MumfordDivisor(C, E1.u, E1.v, check=False), MumfordDivisor(C, E2.u, E2.v, check=False))
    return EffectiveDivisor((E1.pure * E2.pure * d).monic(), u, v)


def effective_scale(C: HyperellipticCurve, E: EffectiveDivisor, k: int) -> EffectiveDivisor:
    out = effective_zero(C)
    for _ in range(k):
        out = effective_add(C, out, E)
    return out


def factor_zeros(C: HyperellipticCurve, a: Poly, b: Poly) -> EffectiveDivisor:
    """Affine zero divisor of a + b*Y."""
    R = C.ring
    one = Poly.const(1, R)
    if b.is_zero():
        return EffectiveDivisor(a.monic(), one, Poly((), R))
    g0 = b.monic() if a.is_zero() else a.gcd(b)
    a1, b1 = a // g0, b // g0
    norm = a1 * a1 - b1 * b1 * C.f
    if norm.deg <= 0:
        return EffectiveDivisor(g0, one, Poly((), R))
    u = norm.monic()
    w = (-a1) * b1.inverse_mod(u) % u
    return EffectiveDivisor(g0, u, w)


def divisor_of(fn: FunctionProduct) -> tuple[EffectiveDivisor, EffectiveDivisor, int]:
    """(zeros, poles, order at infinity) of a factored function; affine parts normalised."""
    C = fn.curve
    zeros, poles = effective_zero(C), effective_zero(C)
    for a, b, e in fn.items():
        E = factor_zeros(C, a, b)
        if e > 0:
            zeros = effective_add(C, zeros, effective_scale(C, E, e))
        else:
            poles = effective_add(C, poles, effective_scale(C, E, -e))
    return zeros, poles, fn.order_at_infinity()


def audit(fn: FunctionProduct, n: int, A: MumfordDivisor, B: MumfordDivisor) -> dict:
    """Check div(fn) = n*E_A - n*E_B exactly (both effective, equal degree)."""
    C = fn.curve
    zeros, poles, ord_inf = divisor_of(fn)
    EA = effective_scale(C, EffectiveDivisor(Poly.const(1, C.ring), A.u, A.v), n)
    EB = effective_scale(C, EffectiveDivisor(Poly.const(1, C.ring), B.u, B.v), n)
    lhs = effective_add(C, zeros, EB)
    rhs = effective_add(C, EA, poles)
    matches = lhs == rhs and ord_inf == 0 and A.degree == B.degree
    return {
        "factor_zero_degree": zeros.degree,
        "factor_pole_degree": poles.degree,
        "order_at_infinity": ord_inf,
        "net_degree": zeros.degree - poles.degree + ord_inf,
        # after cancellation the divisor is n*E_A - n*E_B
        "zero_degree": n * A.degree if matches else None,
        "pole_degree": n * B.degree if matches else None,
        "ok": matches,
    }
