"""Exact integer routines: primality, effort-bounded factoring, symbols, roots."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from heistorsor import kernels

# Bases 2..37 are a deterministic witness set for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
# Extra rounds (fixed seed) above the deterministic limit.
MR_EXTRA_ROUNDS = 16

DEFAULT_TRIAL_BOUND = 10_000
DEFAULT_RHO_ITERATIONS = 200_000


def _mr_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, fixed-seed probabilistic above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_mr_round(n, d, s, a) for a in _MR_BASES):
        return False
    if n < _MR_DETERMINISTIC_LIMIT:
        return True
    rng = random.Random(n)
    return all(_mr_round(n, d, s, rng.randrange(2, n - 1)) for _ in range(MR_EXTRA_ROUNDS))


def next_prime(n: int) -> int:
    n = max(n + 1, 2)
    while not is_prime(n):
        n += 1
    return n


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


@dataclass
class Factorization:
    """Prime factorization of |m|, possibly partial.

    ``cofactor`` is 1 when complete; otherwise it is the composite part that
    the effort bound left unsplit.
    """

    sign: int
    factors: dict[int, int] = field(default_factory=dict)
    cofactor: int = 1

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    def value(self) -> int:
        out = self.sign * self.cofactor
        for p, e in self.factors.items():
            out *= p**e
        return out

    def items(self) -> list[tuple[int, int]]:
        return sorted(self.factors.items())

    def primes(self) -> list[int]:
        return sorted(self.factors)


def _rho(n: int, budget: int, seed: int) -> int | None:
    """Pollard-Brent; returns a nontrivial factor or None within ``budget`` steps."""
    if n % 2 == 0:
        return 2
    rng = random.Random(seed)
    spent = 0
    while spent < budget:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1 and spent < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            spent += r
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


def factor_int(
    m: int,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    rho_iterations: int = DEFAULT_RHO_ITERATIONS,
) -> Factorization:
    """Factor ``m`` by trial division then Pollard-Brent, within an effort bound.

    Never guesses: a composite the budget cannot split is returned as
    ``cofactor`` and the factorization is flagged incomplete.
    """
    if m == 0:
        raise ValueError("cannot factor 0")
    result = Factorization(sign=-1 if m < 0 else 1)
    n = abs(m)
    small, n = kernels.trial_divide(n, trial_bound)
    for p, e in small:
        result.factors[p] = result.factors.get(p, 0) + e
    stack = [n] if n > 1 else []
    leftovers = []
    while stack:
        k = stack.pop()
        if k == 1:
            continue
        if k <= trial_bound * trial_bound or is_prime(k):
            # below trial_bound^2 any survivor of trial division is prime
            result.factors[k] = result.factors.get(k, 0) + 1
            continue
        r = math.isqrt(k)
        if r * r == k:
            stack += [r, r]
            continue
        g = _rho(k, rho_iterations, seed=k & 0xFFFFFFFF)
        if g is None:
            leftovers.append(k)
        else:
            stack += [g, k // g]
    for k in leftovers:
        result.cofactor *= k
    return result


def squarefree_part(m: int, **effort) -> tuple[int, int]:
    """Return (d, s) with m = d*s^2, d squarefree, sign(d) = sign(m).

    Raises ``IncompleteFactorization`` if the effort bound is hit.
    """
    if m == 0:
        raise ValueError("squarefree part of 0 is undefined")
    fac = factor_int(m, **effort)
    if not fac.complete:
        raise IncompleteFactorization(m, fac)
    d, s = fac.sign, 1
    for p, e in fac.factors.items():
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    return d, s


def squarefree_part_rational(q: Fraction, **effort) -> tuple[int, Fraction]:
    """q = d * s^2 with d a squarefree integer and s a positive rational."""
    num, den = q.numerator, q.denominator
    d, s = squarefree_part(num * den, **effort)
    return d, Fraction(s, den)


class IncompleteFactorization(ArithmeticError):
    def __init__(self, m: int, fac: Factorization):
        super().__init__(f"factorization of {m} incomplete (cofactor {fac.cofactor})")
        self.m = m
        self.factorization = fac


def jacobi(a: int, m: int) -> int:
    if m <= 0 or m % 2 == 0:
        raise ValueError("Jacobi symbol needs an odd positive modulus")
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def kronecker(a: int, m: int) -> int:
    """Kronecker symbol (a/m) for m > 0; used for splitting of primes in quadratic fields."""
    if m <= 0:
        raise ValueError("modulus must be positive")
    result = 1
    while m % 2 == 0:
        m //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    return result * jacobi(a, m) if m > 1 else result


def valuation(m: int | Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    if m == 0:
        raise ValueError("valuation of 0")
    if isinstance(m, Fraction):
        return valuation(m.numerator, p) - valuation(m.denominator, p)
    m = abs(m)
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of a mod an odd prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def sqrt_padic(a: int, p: int, k: int) -> int | None:
    """r with r^2 = a mod p^k for a p-adic unit a (p odd or p = 2), or None."""
    mod = p**k
    if a % p == 0:
        raise ValueError("sqrt_padic needs a unit")
    if p == 2:
        if k <= 3:
            cands = [r for r in range(1, 8, 2) if (r * r - a) % mod == 0]
            return cands[0] if cands else None
        if a % 8 != 1:
            return None
        r = 1
        for j in range(3, k):
            # r^2 = a mod 2^j; fix mod 2^(j+1)
            if (r * r - a) % (1 << (j + 1)):
                r += 1 << (j - 1)
        return r % mod
    r = sqrt_mod_prime(a, p)
    if r is None:
        return None
    pk = p
    for _ in range(1, k):
        pk *= p
        # Newton step r <- r - (r^2 - a)/(2r)
        r = (r - (r * r - a) * pow(2 * r, -1, pk)) % pk
    return r % mod


def iroot(m: int, n: int) -> tuple[int, bool]:
    """Integer n-th root of m >= 0 (floor) and whether it is exact."""
    if m < 0:
        raise ValueError("negative radicand")
    if m < 2:
        return m, True
    r = 1 << ((m.bit_length() + n - 1) // n)
    # Newton iteration from above
    while True:
        nr = ((n - 1) * r + m // r ** (n - 1)) // n
        if nr >= r:
            break
        r = nr
    while r**n > m:
        r -= 1
    while (r + 1) ** n <= m:
        r += 1
    return r, r**n == m


def rational_nth_root(q: Fraction, n: int) -> Fraction | None:
    """Exact n-th root of a rational (odd n allows negatives), or None."""
    if q == 0:
        return Fraction(0)
    if q < 0:
        if n % 2 == 0:
            return None
        r = rational_nth_root(-q, n)
        return None if r is None else -r
    a, ea = iroot(q.numerator, n)
    b, eb = iroot(q.denominator, n)
    return Fraction(a, b) if ea and eb else None


def crt(residues: list[int], moduli: list[int]) -> tuple[int, int]:
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        g = math.gcd(m, mi)
        if (r - x) % g:
            raise ValueError("incompatible congruences")
        l = m // g * mi
        t = (r - x) // g * pow(m // g, -1, mi // g) % (mi // g)
        x = (x + m * t) % l
        m = l
    return x, m


def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    qs = factor_int(p - 1).primes()
    g = 2
    while any(pow(g, (p - 1) // q, p) == 1 for q in qs):
        g += 1
    return g


def euler_phi(n: int) -> int:
    out = n
    for p in factor_int(n).primes():
        out = out // p * (p - 1)
    return out
