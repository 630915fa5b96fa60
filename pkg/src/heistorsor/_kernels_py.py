"""Pure-Python versions of the hot kernels.

Same signatures and results as the compiled ``_kernels`` extension; used when
the extension is not built or ``HEISTORSOR_PURE_PYTHON=1``.
"""

from __future__ import annotations

import math


def trial_divide(n: int, bound: int) -> tuple[list[tuple[int, int]], int]:
    """Strip prime factors <= bound from n > 0; returns (factors, cofactor)."""
    out = []
    for p in (2, 3):
        if p > bound:
            break
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    p, step = 5, 2
    while p <= bound and p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += step
        step = 6 - step
    if 1 < n <= bound:
        out.append((n, 1))
        n = 1
    return out, n


def char_sum(coeffs: list[int], p: int) -> int:
    """Sum of Legendre symbols (F(x)/p) over x in F_p; coeffs low-to-high."""
    half = (p - 1) // 2
    is_sq = bytearray(p)
    for y in range(1, half + 1):
        is_sq[y * y % p] = 1
    rev = [c % p for c in reversed(coeffs)]
    total = 0
    for x in range(p):
        v = 0
        for c in rev:
            v = (v * x + c) % p
        if v:
            total += 1 if is_sq[v] else -1
    return total


def bqf_reduce(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Reduce a positive definite form: |b| <= a <= c, b >= 0 if |b| = a or a = c."""
    while True:
        if not (-a < b <= a):
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * k * a
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return a, b, c


def bqf_compose(a1: int, b1: int, c1: int, a2: int, b2: int, c2: int) -> tuple[int, int, int]:
    """Composition of primitive forms of equal discriminant, reduced."""
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return bqf_reduce(a3, b3, c3)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def class_number(D: int) -> int:
    """Number of primitive reduced forms of discriminant D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("need a negative discriminant D = 0, 1 mod 4")
    h = 0
    bmax = math.isqrt(-D // 3)
    for b in range(D % 2, bmax + 1, 2):
        q = (b * b - D) // 4
        a = max(b, 1)
        while a * a <= q:
            if q % a == 0:
                c = q // a
                if math.gcd(math.gcd(a, b), c) == 1:
                    h += 1 if (a == b or a == c or b == 0) else 2
            a += 1
    return h
