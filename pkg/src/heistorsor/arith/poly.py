"""Dense univariate polynomials over Q, F_p or Z/mZ.

Coefficients are stored low degree first as plain ints (residue rings) or
Fractions (Q), never with trailing zeros.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from heistorsor.arith.modular import QQ, DomainMismatch, Ring

DEG_ZERO = -1  # degree of the zero polynomial


class Poly:
    __slots__ = ("c", "ring")

    def __init__(self, coeffs: Iterable = (), ring: Ring = QQ, _raw: bool = False):
        self.ring = ring
        cs = list(coeffs) if _raw else [ring.convert(x) for x in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.c = tuple(cs)

    # -- constructors -----------------------------------------------------
    @classmethod
    def x(cls, ring: Ring = QQ) -> Poly:
        return cls((0, 1), ring)

    @classmethod
    def const(cls, a, ring: Ring = QQ) -> Poly:
        return cls((a,), ring)

    @classmethod
    def monomial(cls, k: int, a=1, ring: Ring = QQ) -> Poly:
        return cls([0] * k + [a], ring)

    def _new(self, coeffs) -> Poly:
        return Poly(coeffs, self.ring, _raw=True)

    def _norm(self, cs: list) -> Poly:
        m = getattr(self.ring, "m", None)
        if m is not None:
            cs = [x % m for x in cs]
        return Poly(cs, self.ring, _raw=True)

    # -- basic data -------------------------------------------------------
    @property
    def deg(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self):
        return self.c[-1] if self.c else self.ring.convert(0)

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self) -> bool:
        return bool(self.c)

    def __getitem__(self, i: int):
        return self.c[i] if 0 <= i < len(self.c) else self.ring.convert(0)

    def coeffs(self) -> list:
        return list(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.ring == other.ring and self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other, self.ring)
        return NotImplemented

    def __hash__(self):
        return hash((self.c, self.ring))

    def __repr__(self) -> str:
        if not self.c:
            return "0"
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if a == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and a == 1:
                terms.append(mono)
            else:
                terms.append(f"({a})" + (f"*{mono}" if mono else ""))
        return " + ".join(terms)

    def _check(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise DomainMismatch(f"{self.ring} vs {other.ring}")
            return other
        return Poly.const(other, self.ring)

    # -- ring operations --------------------------------------------------
    def __add__(self, other) -> Poly:
        o = self._check(other)
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for i, y in enumerate(b):
            cs[i] = cs[i] + y
        return self._norm(cs)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return self._norm([-x for x in self.c])

    def __sub__(self, other) -> Poly:
        return self + (-self._check(other))

    def __rsub__(self, other) -> Poly:
        return self._check(other) - self

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            k = self.ring.convert(other)
            return self._norm([x * k for x in self.c])
        o = self._check(other)
        if not self.c or not o.c:
            return self._new(())
        out = [0] * (len(self.c) + len(o.c) - 1)
        for i, x in enumerate(self.c):
            if x == 0:
                continue
            for j, y in enumerate(o.c):
                out[i + j] += x * y
        return self._norm(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power")
        result, base = Poly.const(1, self.ring), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, k) -> Poly:
        return self * k

    def divmod(self, other) -> tuple[Poly, Poly]:
        o = self._check(other)
        if not o.c:
            raise ZeroDivisionError("polynomial division by zero")
        inv = self.ring.inv(o.c[-1])
        r = list(self.c)
        dq = len(r) - len(o.c)
        if dq < 0:
            return self._new(()), self
        q = [0] * (dq + 1)
        m = getattr(self.ring, "m", None)
        db = len(o.c) - 1
        for k in range(dq, -1, -1):
            t = r[k + db] * inv
            if m is not None:
                t %= m
            q[k] = t
            if t:
                for j in range(db + 1):
                    r[k + j] -= t * o.c[j]
                if m is not None:
                    for j in range(db + 1):
                        r[k + j] %= m
        return self._norm(q), self._norm(r[:db])

    def __divmod__(self, other):
        return self.divmod(other)

    def __floordiv__(self, other) -> Poly:
        return self.divmod(other)[0]

    def __mod__(self, other) -> Poly:
        return self.divmod(other)[1]

    def exact_div(self, other) -> Poly:
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("division not exact")
        return q

    def divides(self, other: Poly) -> bool:
        if not self.c:
            return not other.c
        return not (other % self).c

    def monic(self) -> Poly:
        if not self.c:
            return self
        return self * self.ring.inv(self.c[-1])

    def __call__(self, x):
        """Horner evaluation; x may be a ring element or anything with + and *."""
        acc = 0
        for a in reversed(self.c):
            acc = acc * x + a
        m = getattr(self.ring, "m", None)
        if m is not None and isinstance(acc, int):
            acc %= m
        return acc

    def compose(self, g: Poly) -> Poly:
        acc = self._new(())
        for a in reversed(self.c):
            acc = acc * g + a
        return acc

    def derivative(self) -> Poly:
        return self._norm([i * a for i, a in enumerate(self.c)][1:])

    def change_ring(self, ring: Ring) -> Poly:
        return Poly(self.c, ring)

    def content_free(self) -> Poly:
        """Monic version; alias kept for readability at call sites over fields."""
        return self.monic()

    # -- Euclidean algorithms (field coefficients) ------------------------
    def _need_field(self):
        if not self.ring.is_field:
            raise ArithmeticError(f"{self.ring} is not a field")

    def gcd(self, other) -> Poly:
        self._need_field()
        a, b = self, self._check(other)
        while b.c:
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other) -> tuple[Poly, Poly, Poly]:
        """(g, s, t) with s*self + t*other = g monic."""
        self._need_field()
        r0, r1 = self, self._check(other)
        s0, s1 = Poly.const(1, self.ring), self._new(())
        t0, t1 = self._new(()), Poly.const(1, self.ring)
        while r1.c:
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if not r0.c:
            return r0, s0, t0
        k = self.ring.inv(r0.lc)
        return r0 * k, s0 * k, t0 * k

    def inverse_mod(self, m: Poly) -> Poly:
        g, s, _ = self.xgcd(m)
        if g.deg != 0:
            raise ZeroDivisionError("not invertible modulo the given polynomial")
        return s % m

    def pow_mod(self, k: int, m: Poly) -> Poly:
        result, base = Poly.const(1, self.ring) % m, self % m
        while k:
            if k & 1:
                result = result * base % m
            base = base * base % m
            k >>= 1
        return result

    def resultant(self, other) -> object:
        """Res(self, other) via the Euclidean remainder sequence."""
        self._need_field()
        a, b = self, self._check(other)
        if not a.c or not b.c:
            return self.ring.convert(0)
        one = self.ring.convert(1)
        res = one
        while True:
            da, db = a.deg, b.deg
            if db == 0:
                return res * _power(b.c[0], da, one)
            r = a % b
            if not r.c:
                return self.ring.convert(0)
            if (da * db) % 2:
                res = -res
            res = res * _power(b.c[-1], da - r.deg, one)
            a, b = b, r
            m = getattr(self.ring, "m", None)
            if m is not None:
                res %= m

    def discriminant(self):
        n = self.deg
        if n < 1:
            raise ValueError("discriminant of a constant polynomial")
        r = self.resultant(self.derivative())
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        d = sign * r * self.ring.inv(self.lc)
        m = getattr(self.ring, "m", None)
        return d % m if m is not None else d

    def is_irreducible(self) -> bool:
        """Rabin's test; prime fields only."""
        p = getattr(self.ring, "p", None)
        if p is None:
            raise ArithmeticError("irreducibility test implemented over F_p only")
        from heistorsor.arith.integers import factor_int

        k = self.deg
        if k <= 0:
            return False
        m = self.monic()
        t = Poly.x(self.ring)
        if t.pow_mod(p**k, m) != t % m:
            return False
        for r in factor_int(k).primes():
            if m.gcd(t.pow_mod(p ** (k // r), m) - t).deg != 0:
                return False
        return True

    def is_squarefree(self) -> bool:
        if self.deg <= 0:
            return True
        return self.gcd(self.derivative()).deg == 0

    def squarefree_decomposition(self) -> list[tuple[Poly, int]]:
        """Yun's algorithm: [(s_i, i)] with self ~ prod s_i^i, s_i squarefree coprime.

        Requires characteristic 0 or larger than the degree.
        """
        self._need_field()
        ch = self.ring.characteristic
        if ch and ch <= self.deg:
            raise ArithmeticError("squarefree decomposition needs char > degree")
        out = []
        f = self.monic()
        if f.deg <= 0:
            return out
        fp = f.derivative()
        a = f.gcd(fp)
        b = f // a
        c = fp // a
        d = c - b.derivative()
        i = 1
        while b.deg > 0:
            a = b.gcd(d)
            b = b // a
            c = d // a
            if a.deg > 0:
                out.append((a, i))
            d = c - b.derivative()
            i += 1
        return out


def sqrt_mod_irreducible(a: Poly, m: Poly, rng=None) -> Poly | None:
    """Square root of a in F_p[x]/(m), m irreducible (Tonelli-Shanks); None if a is a non-square."""
    import random

    p = m.ring.p
    q = p**m.deg
    a = a % m
    one = Poly.const(1, m.ring)
    if a.is_zero():
        return a
    if a.pow_mod((q - 1) // 2, m) != one:
        return None
    s, t = 0, q - 1
    while t % 2 == 0:
        s, t = s + 1, t // 2
    rng = rng or random.Random(q)
    while True:
        z = Poly([rng.randrange(p) for _ in range(m.deg)], m.ring)
        if not z.is_zero() and z.pow_mod((q - 1) // 2, m) != one:
            break
    c = z.pow_mod(t, m)
    x = a.pow_mod((t + 1) // 2, m)
    b = a.pow_mod(t, m)
    e = s
    while b != one:
        k, b2 = 0, b
        while b2 != one:
            b2 = b2 * b2 % m
            k += 1
        w = c.pow_mod(1 << (e - k - 1), m)
        x = x * w % m
        c = w * w % m
        b = b * c % m
        e = k
    return x


def _power(x, k: int, one):
    out = one
    for _ in range(k):
        out = out * x
    return out


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over a field; gcd(0, 0) = 0."""
    if a.ring != b.ring:
        raise DomainMismatch(f"{a.ring} vs {b.ring}")
    return a.gcd(b)


def poly_discriminant(f: Poly):
    return f.discriminant()


def coprime_base(polys: Sequence[Poly]) -> list[Poly]:
    """Pairwise coprime monic nonconstant polys generating the same factor set."""
    base: list[Poly] = []
    for p in polys:
        if p.deg <= 0:
            continue
        pending = [p.monic()]
        while pending:
            q = pending.pop()
            if q.deg <= 0:
                continue
            for i, b in enumerate(base):
                g = q.gcd(b)
                if g.deg > 0:
                    base.pop(i)
                    pending += [g, q // g, b // g]
                    break
            else:
                base.append(q)
    # dedupe powers collapsing to the same element
    out: list[Poly] = []
    for b in base:
        if b not in out:
            out.append(b)
    return out


def multiplicity(q: Poly, u: Poly) -> int:
    """Largest e with q^e | u (q nonconstant)."""
    e = 0
    while u.deg >= q.deg and q.divides(u):
        u = u // q
        e += 1
    return e
