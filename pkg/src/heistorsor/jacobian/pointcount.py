"""Naive point counting over F_{p^k} and |J(F_p)| from the L-polynomial (genus <= 3)."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from heistorsor import kernels
from heistorsor.arith.modular import GF
from heistorsor.arith.poly import Poly
from heistorsor.jacobian.curve import HyperellipticCurve

MAX_GENUS = 3
MAX_FIELD_SIZE = 2_000_000


class UnsupportedGenus(ValueError):
    pass


class ExtensionField:
    """F_{p^k} = F_p[t]/(m) with log/antilog tables; elements are ints 0..q-1 (base-p digits)."""

    def __init__(self, p: int, k: int):
        q = p**k
        if q > MAX_FIELD_SIZE:
            raise ValueError(f"F_{p}^{k} too large for table arithmetic")
        self.p, self.k, self.q = p, k, q
        self.modulus = _primitive_poly(p, k)
        exp = [0] * (q - 1)
        log = [0] * q
        # powers of t, each stored as a coefficient vector encoded base p
        cur = [1] + [0] * (k - 1)
        m = self.modulus.c
        for i in range(q - 1):
            code = _encode(cur, p)
            exp[i] = code
            log[code] = i
            # multiply by t and reduce by the monic modulus
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(c - top * m[j]) % p for j, c in enumerate(cur)]
        self.exp, self.log = exp, log

    def add(self, a: int, b: int) -> int:
        p = self.p
        out, w = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def from_int(self, c: int) -> int:
        return c % self.p

    def is_square(self, a: int) -> int:
        """Quadratic character: 0, 1 or -1."""
        if a == 0:
            return 0
        return 1 if self.log[a] % 2 == 0 else -1

    def eval(self, coeffs: list[int], x: int) -> int:
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c % self.p)
        return acc


def _encode(vec: list[int], p: int) -> int:
    out = 0
    for c in reversed(vec):
        out = out * p + c
    return out


@lru_cache(maxsize=None)
def _primitive_poly(p: int, k: int) -> Poly:
    """Lexicographically first monic degree-k polynomial whose root generates F_{p^k}^x."""
    R = GF(p)
    if k == 1:
        from heistorsor.arith.integers import primitive_root

        return Poly((-primitive_root(p), 1), R)
    order = p**k - 1
    from heistorsor.arith.integers import factor_int

    primes = factor_int(order).primes()
    t = Poly.x(R)
    for tail in itertools.product(range(p), repeat=k):
        m = Poly(list(tail) + [1], R)
        if tail[0] == 0:
            continue
        if not m.is_irreducible():
            continue
        if t.pow_mod(order, m) != Poly.const(1, R):
            continue
        if all(t.pow_mod(order // r, m) != Poly.const(1, R) for r in primes):
            return m
    raise ArithmeticError("no primitive polynomial found")


def count_points(C: HyperellipticCurve, k: int = 1) -> int:
    """#C(F_{p^k}) on the smooth model: affine points plus the points at infinity."""
    p = C.p
    if p is None:
        raise ValueError("curve must be over F_p")
    coeffs = [int(c) for c in C.f.c]
    if C.odd:
        at_inf = 1
    elif k % 2 == 0:
        at_inf = 2  # every element of F_p is a square in F_{p^2}
    else:
        at_inf = 2 if pow(coeffs[-1], (p - 1) // 2, p) == 1 else 0
    q = p**k
    if k == 1:
        return at_inf + q + kernels.char_sum(coeffs, p)
    K = ExtensionField(p, k)
    total = 0
    for x in range(q):
        total += K.is_square(K.eval(coeffs, x))
    return at_inf + q + total


def l_polynomial(C: HyperellipticCurve) -> list[int]:
    """Coefficients a_0..a_{2g} of L(T) = prod (1 - alpha_i T)."""
    g = C.genus
    if g > MAX_GENUS:
        raise UnsupportedGenus(f"genus {g} > {MAX_GENUS}")
    p = C.p
    power_sums = []
    for k in range(1, g + 1):
        Nk = count_points(C, k)
        power_sums.append(p**k + 1 - Nk)
    # Newton: i e_i = sum_{j=1}^{i} (-1)^(j-1) e_{i-j} s_j
    e = [Fraction(1)]
    for i in range(1, g + 1):
        acc = sum((-1) ** (j - 1) * e[i - j] * power_sums[j - 1] for j in range(1, i + 1))
        e.append(acc / i)
    if any(x.denominator != 1 for x in e):
        raise ArithmeticError("non-integral L-polynomial coefficient")
    a = [int((-1) ** i * e[i]) for i in range(g + 1)]
    for i in range(g + 1, 2 * g + 1):
        a.append(p ** (i - g) * a[2 * g - i])
    return a


def jacobian_order_mod_p(C: HyperellipticCurve) -> int:
    return sum(l_polynomial(C))
