"""Hyperelliptic curves y^2 = f(x), the lambda-family, and the odd-degree model.

The working model for Jacobian arithmetic always has odd degree 2g+1; a curve
of even degree is moved there through a rational Weierstrass point W = (x_W, 0)
by x = x_W + 1/X, y = Y / X^(g+1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from heistorsor.arith.integers import is_prime, sqrt_mod_prime
from heistorsor.arith.modular import GF, QQ, Ring
from heistorsor.arith.poly import Poly

INF = "inf"  # the unique point at infinity of an odd model
INF_PLUS = "+inf"  # branch with y / x^(g+1) -> +sqrt(lc f)
INF_MINUS = "-inf"


class CurveError(ValueError):
    pass


class BadPrime(ValueError):
    def __init__(self, p: int, reason: str):
        super().__init__(f"p={p}: {reason}")
        self.p = p
        self.reason = reason


class HyperellipticCurve:
    """y^2 = f(x) with f squarefree of degree >= 3 over a field of odd characteristic."""

    def __init__(self, f: Poly, family: "FamilyParams | None" = None):
        if not f.ring.is_field:
            raise CurveError(f"{f.ring} is not a field")
        if f.ring.characteristic == 2:
            raise CurveError("characteristic 2 is not supported")
        if f.deg < 3:
            raise CurveError("need deg f >= 3")
        if not f.is_squarefree():
            raise CurveError("f is not squarefree")
        self.f = f
        self.ring: Ring = f.ring
        self.genus = (f.deg - 1) // 2
        self.odd = f.deg % 2 == 1
        self.family = family

    @property
    def p(self) -> int | None:
        return getattr(self.ring, "p", None)

    def __eq__(self, other):
        return isinstance(other, HyperellipticCurve) and self.f == other.f

    def __hash__(self):
        return hash(self.f)

    def __repr__(self):
        return f"HyperellipticCurve(y^2 = {self.f} over {self.ring})"

    def is_point(self, x, y) -> bool:
        k = self.ring.convert
        return k(y) * k(y) == self.f(k(x)) if self.p is None else (y * y - self.f(x)) % self.p == 0

    def rational_weierstrass_x(self) -> list:
        """Rational roots of f (over F_p by search; over Q by rational-root candidates)."""
        if self.p is not None:
            return [x for x in range(self.p) if self.f(x) == 0]
        return _rational_roots(self.f)

    def reduce_mod_p(self, p: int, n: int | None = None) -> HyperellipticCurve:
        reason = bad_prime_reason(self, p, n)
        if reason:
            raise BadPrime(p, reason)
        return HyperellipticCurve(self.f.change_ring(GF(p)), family=self.family)


def _rational_roots(f: Poly) -> list[Fraction]:
    from heistorsor.arith.integers import factor_int

    # clear denominators, then p/q with p | a0 and q | an
    import math

    den = math.lcm(*(c.denominator for c in f.c))
    ints = [int(c * den) for c in f.c]
    k = 0
    while ints[k] == 0:
        k += 1
    roots = [Fraction(0)] if k else []
    ints = ints[k:]

    def divisors(m: int) -> list[int]:
        ds = [1]
        for p, e in factor_int(abs(m)).items():
            ds = [d * p**i for d in ds for i in range(e + 1)]
        return ds

    g = Poly(ints)
    for num in divisors(ints[0]):
        for q in divisors(ints[-1]):
            for s in (1, -1):
                r = Fraction(s * num, q)
                if r not in roots and g(r) == 0:
                    roots.append(r)
    return sorted(roots)


# -- the lambda family -----------------------------------------------------------


@dataclass(frozen=True)
class FamilyParams:
    n: int
    lam: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        if self.n < 3 or self.n % 2 == 0:
            raise CurveError(f"n must be odd and > 1, got {self.n}")
        if self.lam == 0:
            raise CurveError("lambda must be nonzero")
        if self.lam * self.lam == 1:
            raise CurveError("lambda^2 = 1 makes f non-squarefree")

    @property
    def s(self) -> Fraction:
        return (1 + self.lam**2) / 2

    @property
    def t(self) -> Fraction:
        return (1 - self.lam**2) / 2


def family_poly(params: FamilyParams, ring: Ring = QQ) -> Poly:
    n, lam = params.n, params.lam
    coeffs = [0] * (2 * n + 1)
    coeffs[0] = lam**2
    coeffs[n] = -(1 + lam**2)
    coeffs[2 * n] = 1
    return Poly(coeffs, ring)


def family_curve(params: FamilyParams) -> HyperellipticCurve:
    return HyperellipticCurve(family_poly(params), family=params)


def seed_identity_holds(params: FamilyParams) -> bool:
    """(x^n - s)^2 - f == t^2 as polynomials, so div(x^n - s - y) = n*inf+ - n*inf-."""
    x = Poly.x()
    f = family_poly(params)
    return (x ** params.n - params.s) ** 2 - f == Poly.const(params.t**2)


def second_identity_holds(params: FamilyParams) -> bool:
    """f - (alpha x^n + lam)^2 == -((1 - lam^2)^2 / (4 lam^2)) x^(2n) with alpha = -(1+lam^2)/(2 lam).

    Hence div((y - g)/x^n) = n*(0, lam) - n*(0, -lam).
    """
    n, lam = params.n, params.lam
    alpha = -(1 + lam**2) / (2 * lam)
    x = Poly.x()
    g = x**n * alpha + lam
    return family_poly(params) - g * g == Poly.monomial(2 * n, -((1 - lam**2) ** 2) / (4 * lam**2))


# -- good primes -------------------------------------------------------------------


def bad_prime_reason(C: HyperellipticCurve, p: int, n: int | None = None) -> str | None:
    if p == 2:
        return "characteristic 2"
    if not is_prime(p):
        return "not prime"
    if n is not None and n % p == 0:
        return f"p divides n={n}"
    if C.p is not None:
        return "curve already over a finite field"
    for c in C.f.c:
        if c.denominator % p == 0:
            return "p divides a coefficient denominator"
    fp = C.f.change_ring(GF(p))
    if fp.deg != C.f.deg:
        return "leading coefficient vanishes mod p"
    if not fp.is_squarefree():
        return "f mod p is not squarefree"
    return None


def good_primes(C: HyperellipticCurve, n: int, count: int, congruent_one: bool = True, start: int = 3, bound: int = 10_000) -> list[int]:
    """The first ``count`` good primes (p = 1 mod n when ``congruent_one``)."""
    out = []
    p = start
    while len(out) < count and p <= bound:
        if is_prime(p) and (not congruent_one or p % n == 1):
            extra = None
            if isinstance(C, OddModel):
                extra = bad_prime_reason(C.odd, p, n) or bad_prime_reason(C.even, p, n)
            else:
                extra = bad_prime_reason(C, p, n)
            if extra is None:
                out.append(p)
        p += 1
    return out


# -- odd-degree model through a rational Weierstrass point ----------------------------


@dataclass(frozen=True)
class EvenDivisor:
    """E(u, v) + m_plus*inf+ + m_minus*inf- + m_w*W on the even model, total degree 0."""

    u: Poly
    v: Poly
    m_plus: int = 0
    m_minus: int = 0
    m_w: int = 0

    @property
    def degree(self) -> int:
        return self.u.deg + self.m_plus + self.m_minus + self.m_w


class OddModel:
    """Odd-degree model Y^2 = F(X) of an even-degree curve, with transports both ways."""

    def __init__(self, even: HyperellipticCurve, x_w):
        if even.odd:
            raise CurveError("curve already has odd degree")
        R = even.ring
        x_w = R.convert(x_w)
        if even.f(x_w) != 0:
            raise CurveError(f"({x_w}, 0) is not a Weierstrass point")
        g = even.genus
        X = Poly.x(R)
        one = Poly.const(1, R)
        F = Poly((), R)
        for i, fi in enumerate(even.f.c):
            if fi:
                F = F + (X * x_w + one) ** i * X ** (2 * g + 2 - i) * fi
        if F.deg != 2 * g + 1:
            raise CurveError("transformed polynomial does not have odd degree")
        self.even = even
        self.odd = HyperellipticCurve(F, family=even.family)
        self.x_w = x_w
        self.genus = g
        self.ring = R
        # y / x^(g+1) -> +-c at the two points at infinity, c^2 = lc f = F(0)
        self.c_inf = _field_sqrt(R, even.f.lc)

    @property
    def p(self):
        return self.even.p

    def reduce_mod_p(self, p: int, n: int | None = None) -> OddModel:
        reason = bad_prime_reason(self.even, p, n) or bad_prime_reason(self.odd, p, n)
        if reason:
            raise BadPrime(p, reason)
        return OddModel(self.even.reduce_mod_p(p, n), self.x_w)

    # -- points ------------------------------------------------------------------
    def point_to_odd(self, P):
        R, g = self.ring, self.genus
        if P == (self.x_w, 0) or P == (self.x_w, R.convert(0)):
            return INF
        if P in (INF_PLUS, INF_MINUS):
            if self.c_inf is None:
                raise CurveError("points at infinity are not rational")
            return (R.convert(0), self.c_inf if P == INF_PLUS else self._r(-self.c_inf))
        x, y = R.convert(P[0]), R.convert(P[1])
        X = R.inv(x - self.x_w)
        return (self._r(X), self._r(y * X ** (g + 1)))

    def point_to_even(self, Q):
        R, g = self.ring, self.genus
        if Q == INF:
            return (self.x_w, R.convert(0))
        X, Y = R.convert(Q[0]), R.convert(Q[1])
        if X == 0:
            if Y == self.c_inf:
                return INF_PLUS
            if self._r(-Y) == self.c_inf:
                return INF_MINUS
            raise CurveError("point with X=0 not on the curve")
        return (self._r(self.x_w + R.inv(X)), self._r(Y * R.inv(X) ** (g + 1)))

    def _r(self, a):
        m = getattr(self.ring, "m", None)
        return a % m if m is not None else a

    # -- divisor classes -----------------------------------------------------------
    def class_to_odd(self, E: EvenDivisor):
        from heistorsor.jacobian.mumford import MumfordDivisor, add, neg, point_divisor, scalar_mul

        if E.degree != 0:
            raise CurveError("even-model divisor must have degree 0")
        R, g = self.ring, self.genus
        C = self.odd
        X = Poly.x(R)
        u, v = E.u, E.v
        lin = Poly((-self.x_w, 1), R)
        acc = C.zero()
        if u.deg > 0 and lin.divides(u):
            u = u // lin  # the Weierstrass point itself maps to infinity
            v = v % u if u.deg > 0 else Poly((), R)
        if u.deg > 0:
            k = u.deg
            U = Poly((), R)
            for i, ui in enumerate(u.c):
                if ui:
                    U = U + (X * self.x_w + Poly.const(1, R)) ** i * X ** (k - i) * ui
            U = U.monic()
            T = X.inverse_mod(U)
            arg = (Poly.const(self.x_w, R) + T) % U
            V = v.compose(arg) % U * X ** (g + 1) % U
            acc = MumfordDivisor(C, U, V).reduced()
        for m, sgn in ((E.m_plus, INF_PLUS), (E.m_minus, INF_MINUS)):
            if m:
                P = point_divisor(C, *self.point_to_odd(sgn))
                acc = add(acc, scalar_mul(m, P))
        return acc

    def class_to_even(self, D) -> EvenDivisor:
        R, g = self.ring, self.genus
        U, V = D.u, D.v
        X = Poly.x(R)
        k = 0
        while U.deg > 0 and X.divides(U):
            U = U // X
            k += 1
        m_plus = m_minus = 0
        if k:
            y0 = self._r(V[0])
            if y0 == self.c_inf:
                m_plus = k
            elif self._r(-y0) == self.c_inf:
                m_minus = k
            else:
                raise CurveError("support at X=0 is off the curve")
        if U.deg > 0:
            V = V % U
            d = U.deg
            lin = Poly((-self.x_w, 1), R)  # x - x_W
            u_e = Poly((), R)
            for i, ui in enumerate(U.c):
                if ui:
                    u_e = u_e + lin ** (d - i) * ui
            u_e = u_e.monic()
            T = lin.inverse_mod(u_e)
            v_e = V.compose(T) % u_e * lin.pow_mod(g + 1, u_e) % u_e
        else:
            u_e, v_e = Poly.const(1, R), Poly((), R)
        deg = u_e.deg + m_plus + m_minus
        return EvenDivisor(u_e, v_e, m_plus, m_minus, -deg)


def _field_sqrt(R: Ring, a):
    if a == 0:
        return R.convert(0)
    p = getattr(R, "p", None)
    if p is not None:
        if pow(a, (p - 1) // 2, p) != 1:
            return None
        r = sqrt_mod_prime(a, p)
        return min(r, p - r) if r != 0 else 0
    a = Fraction(a)
    if a < 0:
        return None
    from heistorsor.arith.integers import rational_nth_root

    return rational_nth_root(a, 2)


def to_odd_model(C: HyperellipticCurve, x_w=1) -> OddModel:
    return OddModel(C, x_w)
