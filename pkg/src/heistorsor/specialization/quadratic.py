"""Quadratic fields Q(sqrt d): exact elements, prime valuations, local and global n-th powers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from heistorsor.arith.integers import (
    IncompleteFactorization,
    factor_int,
    kronecker,
    next_prime,
    rational_nth_root,
    sqrt_padic,
    valuation,
)
from heistorsor.arith.poly import Poly


@dataclass(frozen=True)
class QuadField:
    d: int

    def __post_init__(self):
        d = self.d
        if d in (0, 1):
            raise ValueError("d must not be 0 or 1")
        for p, e in factor_int(d).items():
            if e > 1:
                raise ValueError(f"{d} is not squarefree")

    @property
    def disc(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d

    @property
    def imaginary(self) -> bool:
        return self.d < 0

    @property
    def signature(self) -> str:
        return "imaginary" if self.d < 0 else "real"

    def __call__(self, a, b=0) -> QuadElt:
        return QuadElt(Fraction(a), Fraction(b), self.d)

    def splitting(self, q: int) -> str:
        k = kronecker(self.disc, q)
        return "ramified" if k == 0 else ("split" if k == 1 else "inert")

    def to_json(self) -> dict:
        return {"d": str(self.d), "disc": str(self.disc), "signature": self.signature}


class QuadElt:
    """a + b*sqrt(d) with rational a, b."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    def _lift(self, o) -> QuadElt:
        if isinstance(o, QuadElt):
            if o.d != self.d:
                raise ValueError("elements of different quadratic fields")
            return o
        return QuadElt(o, 0, self.d)

    def __add__(self, o):
        o = self._lift(o)
        return QuadElt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElt(-self.a, -self.b, self.d)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        if not isinstance(o, QuadElt):
            o = Fraction(o)
            return QuadElt(self.a * o, self.b * o, self.d)
        o = self._lift(o)
        return QuadElt(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conj(self) -> QuadElt:
        return QuadElt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> QuadElt:
        N = self.norm()
        if N == 0:
            raise ZeroDivisionError("zero in a quadratic field")
        return QuadElt(self.a / N, -self.b / N, self.d)

    def __truediv__(self, o):
        return self * self._lift(o).inverse()

    def __rtruediv__(self, o):
        return self._lift(o) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = QuadElt(1, 0, self.d), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o):
        if not isinstance(o, QuadElt):
            try:
                o = self._lift(o)
            except (TypeError, ValueError):
                return NotImplemented
        return (self.a, self.b, self.d) == (o.a, o.b, o.d)

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt({self.d}))"

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def integral_form(self) -> tuple[int, int, int]:
        """(A, B, D) with self = (A + B sqrt d) / D, D > 0 minimal."""
        D = math.lcm(self.a.denominator, self.b.denominator)
        return int(self.a * D), int(self.b * D), D

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b)}


# -- primes and valuations -------------------------------------------------------------


@dataclass(frozen=True)
class PrimeOfL:
    """A prime of L above q; ``kind`` is split/inert/ramified, ``sign`` picks sqrt(d) = +-r at a split prime."""

    q: int
    kind: str
    sign: int = 0

    @property
    def residue_degree(self) -> int:
        return 2 if self.kind == "inert" else 1

    @property
    def ramification(self) -> int:
        return 2 if self.kind == "ramified" else 1

    def label(self) -> str:
        if self.kind == "split":
            return f"{self.q}{'+' if self.sign > 0 else '-'}"
        return f"{self.q}{'i' if self.kind == 'inert' else 'r'}"


class IncompleteProfile(ArithmeticError):
    pass


def _split_root(d: int, q: int, k: int) -> int:
    r = sqrt_padic(d % q**k, q, k)
    if r is None:
        raise ArithmeticError(f"{d} has no {q}-adic square root")
    return r


def _padic_val(x: int, q: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % q == 0 and v < cap:
        x //= q
        v += 1
    return v


@dataclass
class ValuationProfile:
    """v_P(alpha_i) for each listed prime P; ``roots`` pins the sqrt(d) choice at split primes."""

    field: QuadField
    values: dict[PrimeOfL, list[int]]
    roots: dict[int, tuple[int, int]]  # q -> (r, precision)
    complete: bool = True

    def primes(self) -> list[PrimeOfL]:
        return sorted(self.values, key=lambda P: (P.q, -P.sign, P.kind))

    def of(self, i: int) -> dict[PrimeOfL, int]:
        return {P: vs[i] for P, vs in self.values.items() if vs[i]}

    def to_json(self) -> dict:
        return {P.label(): [str(v) for v in self.values[P]] for P in self.primes()}


def relevant_primes(alphas: list[QuadElt], extra=(), **effort) -> list[int]:
    """Rational primes below which some alpha can have nonzero valuation."""
    out: set[int] = set(extra)
    for al in alphas:
        A, B, D = al.integral_form()
        for m in (D, A * A - al.d * B * B):
            if m == 0:
                raise ValueError("alpha must be nonzero")
            fac = factor_int(m, **effort)
            if not fac.complete:
                raise IncompleteFactorization(m, fac)
            out.update(fac.primes())
    return sorted(out)


def valuation_profile(alphas, L: QuadField, extra_primes=(), **effort) -> ValuationProfile:
    """Valuations of each alpha at every prime of L where one of them is not a unit.

    ``extra_primes`` forces primes into the profile (the primes of S, say).
    An incomplete factorization yields ``complete = False`` and an empty table.
    """
    if isinstance(alphas, QuadElt):
        alphas = [alphas]
    try:
        qs = relevant_primes(alphas, extra_primes, **effort)
    except IncompleteFactorization:
        return ValuationProfile(L, {}, {}, complete=False)
    values: dict[PrimeOfL, list[int]] = {}
    roots: dict[int, tuple[int, int]] = {}
    for q in qs:
        kind = L.splitting(q)
        if kind != "split":
            P = PrimeOfL(q, kind)
            values[P] = []
            for al in alphas:
                vn = valuation(al.norm(), q)
                values[P].append(vn // 2 if kind == "inert" else vn)
            continue
        # enough precision to read off v(A + B r) exactly
        need = 3
        forms = [al.integral_form() for al in alphas]
        for A, B, D in forms:
            need = max(need, valuation(A * A - L.d * B * B, q) + 3)
        r = _split_root(L.d, q, need)
        roots[q] = (r, need)
        mod = q**need
        plus, minus = PrimeOfL(q, "split", 1), PrimeOfL(q, "split", -1)
        values[plus], values[minus] = [], []
        for A, B, D in forms:
            vD = valuation(D, q)
            values[plus].append(_padic_val((A + B * r) % mod, q, need) - vD)
            values[minus].append(_padic_val((A - B * r) % mod, q, need) - vD)
    return ValuationProfile(L, values, roots)


# -- local n-th powers -------------------------------------------------------------


class _LocalRing:
    """O_P / P^k for a prime P of L (q odd, or q = 2 with k = 1), with a reduction map for P-units."""

    def __init__(self, d: int, P: PrimeOfL, k: int, root: int | None = None):
        self.P, self.k = P, k
        q = P.q
        self.q = q
        self.d = d
        if q == 2 and k > 1:
            raise ValueError("2-adic towers above the residue field are not needed for odd n")
        if P.kind == "split":
            self.mod = q**k
            if root is None:
                root = _split_root(d, q, max(k, 3))
            self.r = root * P.sign
        elif P.kind == "inert":
            self.mod = q**k
            if q == 2:
                # basis 1, w with w = (1 + sqrt d)/2, w^2 = w + (d - 1)/4
                self.wn = ((d - 1) // 4) % 2
        else:
            if q == 2:
                self.mod = 2
                self.s0 = 1 if d % 4 == 3 else 0
            else:
                self.ma = q ** ((k + 1) // 2)
                self.mb = q ** (k // 2)

    def reduce(self, x: QuadElt):
        kind, q = self.P.kind, self.q
        if kind == "split":
            A, B, D = x.integral_form()
            v = valuation(D, q)
            if v == 0:
                return (A + B * self.r) * pow(D, -1, self.mod) % self.mod
            # a P-unit can still have q in its denominator (it then sits at the conjugate prime)
            prec = self.k + v
            r = _split_root(self.d, q, max(prec, 3))
            if (r - self.r) % q:
                r = -r
            num = (A + B * r) % q**prec
            if num % q**v:
                raise ValueError("element is not a unit at P")
            return (num // q**v) * pow(D // q**v, -1, self.mod) % self.mod
        if kind == "inert":
            if q == 2:
                a, b = x.a - x.b, 2 * x.b
                return (_frac_mod(a, 2), _frac_mod(b, 2))
            return (_frac_mod(x.a, self.mod), _frac_mod(x.b, self.mod))
        if q == 2:
            return _frac_mod(x.a + x.b * self.s0, 2)
        return (_frac_mod(x.a, self.ma), _frac_mod(x.b, self.mb) if self.mb > 1 else 0)

    def mul(self, s, t):
        kind, q = self.P.kind, self.q
        if kind == "split" or (kind == "ramified" and q == 2):
            return s * t % self.mod
        if kind == "inert":
            (a1, b1), (a2, b2) = s, t
            if q == 2:
                # (a1 + b1 w)(a2 + b2 w), w^2 = w + wn
                return ((a1 * a2 + self.wn * b1 * b2) % 2, (a1 * b2 + a2 * b1 + b1 * b2) % 2)
            m = self.mod
            return ((a1 * a2 + self.d * b1 * b2) % m, (a1 * b2 + a2 * b1) % m)
        (a1, b1), (a2, b2) = s, t
        a = (a1 * a2 + self.d * b1 * b2) % self.ma
        b = (a1 * b2 + a2 * b1) % self.mb if self.mb > 1 else 0
        return (a, b)

    def one(self):
        if self.P.kind == "split" or (self.P.kind == "ramified" and self.q == 2):
            return 1
        return (1, 0)

    def power(self, s, e: int):
        out = self.one()
        while e:
            if e & 1:
                out = self.mul(out, s)
            s = self.mul(s, s)
            e >>= 1
        return out

    def units(self):
        kind, q = self.P.kind, self.q
        if kind == "split" or (kind == "ramified" and q == 2):
            return (x for x in range(self.mod) if x % q)
        if kind == "inert":
            m = 2 if q == 2 else self.mod
            return ((a, b) for a in range(m) for b in range(m) if a % q or b % q)
        return ((a, b) for a in range(self.ma) for b in range(self.mb) if a % q)

    @property
    def residue_size(self) -> int:
        return self.q ** self.P.residue_degree


def _frac_mod(x: Fraction, m: int) -> int:
    return x.numerator * pow(x.denominator, -1, m) % m


def _uniformizer(L: QuadField, P: PrimeOfL) -> QuadElt:
    if P.kind != "ramified":
        return L(P.q)
    if P.q == 2 and L.d % 4 == 3:
        return L(1, 1)
    return L(0, 1)


def hensel_precision(P: PrimeOfL, n: int) -> int:
    """k with 1 + P^k inside the n-th powers: 2 v_P(n) + 1."""
    return 2 * P.ramification * valuation(n, P.q) + 1


def is_local_nth_power(alpha: QuadElt, L: QuadField, P: PrimeOfL, n: int, v: int, root: int | None = None, extra_precision: int = 0) -> bool:
    """Whether alpha is an n-th power in the completion L_P; ``v`` is v_P(alpha).

    At P | n the unit part is compared with the n-th powers of (O/P^k)^x for
    k = 2 v_P(n) + 1 (plus ``extra_precision``); otherwise the residue field decides.
    """
    if v % n:
        return False
    u = alpha * _uniformizer(L, P) ** (-v) if v else alpha
    if math.gcd(P.q, n) > 1:
        k = hensel_precision(P, n) + extra_precision
        r = _split_root(L.d, P.q, max(k, 3)) if P.kind == "split" else None
        R = _LocalRing(L.d, P, k, r)
        return R.reduce(u) in _nth_powers(L.d % P.q ** (k + 1), P.q, P.kind, k, n)
    if P.kind == "split" and P.q == 2:
        return True  # residue field F_2
    R = _LocalRing(L.d, P, 1, root)
    Q = R.residue_size
    g = math.gcd(n, Q - 1)
    return R.power(R.reduce(u), (Q - 1) // g) == R.one()


_POW_CACHE: dict = {}


def _nth_powers(dmod: int, q: int, kind: str, k: int, n: int) -> frozenset:
    """n-th powers of units of O_P / P^k; the ring only depends on d mod q^(k+1)."""
    key = (dmod if kind != "split" else 0, q, kind, k, n)
    hit = _POW_CACHE.get(key)
    if hit is None:
        root = _split_root(dmod, q, max(k, 3)) if kind == "split" else None
        R = _LocalRing(dmod, PrimeOfL(q, kind, 1 if kind == "split" else 0), k, root)
        hit = frozenset(R.power(u, n) for u in R.units())
        _POW_CACHE[key] = hit
    return hit


# -- global n-th powers -------------------------------------------------------------


def _sturm(g: Poly) -> list[Poly]:
    seq = [g, g.derivative()]
    while not seq[-1].is_zero() and seq[-1].deg > 0:
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return seq


def _sign_changes(seq: list[Poly], x) -> int:
    signs = [s for s in (p(x) for p in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def integer_roots(g: Poly) -> list[int]:
    """Integer roots of g in Q[x] by Sturm isolation and integer bisection."""
    if g.deg <= 0:
        return []
    sq = g // g.gcd(g.derivative())
    seq = _sturm(sq)
    lc = sq.lc
    bound = 1 + max((abs(Fraction(c) / lc) for c in sq.c[:-1]), default=0)
    hi = math.ceil(bound) + 1
    lo = -hi
    out = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        cnt = _sign_changes(seq, a) - _sign_changes(seq, b)  # roots in (a, b]
        if cnt == 0:
            continue
        if b - a == 1:
            if sq(b) == 0:
                out.append(b)
            continue
        m = (a + b) // 2
        stack += [(a, m), (m, b)]
    return sorted(out)


def nth_root(beta: QuadElt, n: int) -> QuadElt | None:
    """gamma in L with gamma^n = beta, or None. Assumes n odd and L != Q(sqrt -3) when 3 | n."""
    if beta.is_zero():
        return QuadElt(0, 0, beta.d)
    if beta.b == 0:
        r = rational_nth_root(beta.a, n)
        return None if r is None else QuadElt(r, 0, beta.d)
    m = rational_nth_root(beta.norm(), n)
    if m is None:
        return None
    # scale to an algebraic integer so the trace of the root is an integer
    A, B, D = beta.integral_form()
    c = 2 * D
    bs = beta * Fraction(c) ** n
    ms = m * c * c
    # V_n(T) = gamma^n + conj(gamma)^n as a polynomial in T = trace(gamma)
    T = Poly.x()
    V0, V1 = Poly.const(2), T
    for _ in range(n - 1):
        V0, V1 = V1, T * V1 - V0.scale(ms)
    for t in integer_roots(V1 - Poly.const(bs.trace())):
        p = Fraction(t, 2)
        q2 = (p * p - ms) / bs.d
        q = rational_nth_root(q2, 2)
        if q is None:
            continue
        for s in (q, -q):
            g = QuadElt(p, s, bs.d)
            if g**n == bs:
                return g / c
    return None


def nonpower_witness(beta: QuadElt, n: int, budget: int = 400, start: int = 3) -> int | None:
    """A prime p = 1 mod n, split in L, at which beta is a unit but not an n-th power mod a prime above p."""
    A, B, D = beta.integral_form()
    d = beta.d
    p = start
    tried = 0
    while tried < budget:
        p = next_prime(p)
        if p % n != 1 or kronecker(d, p) != 1:
            continue
        tried += 1
        r = _split_root(d, p, 1)
        x = (A + B * r) % p
        if x == 0 or D % p == 0:
            continue
        val = x * pow(D, -1, p) % p
        if pow(val, (p - 1) // n, p) != 1:
            return p
    return None


def is_nth_power(beta: QuadElt, n: int, profile_values: list[int] | None = None) -> bool:
    if profile_values is not None and any(v % n for v in profile_values):
        return False
    if nonpower_witness(beta, n) is not None:
        return False
    return nth_root(beta, n) is not None


__all__ = [
    "QuadField",
    "QuadElt",
    "PrimeOfL",
    "ValuationProfile",
    "IncompleteProfile",
    "valuation_profile",
    "relevant_primes",
    "is_local_nth_power",
    "hensel_precision",
    "nth_root",
    "integer_roots",
    "nonpower_witness",
    "is_nth_power",
]
