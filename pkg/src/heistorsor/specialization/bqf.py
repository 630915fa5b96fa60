"""Class groups of imaginary quadratic orders via reduced binary quadratic forms."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from heistorsor import kernels
from heistorsor.arith.integers import factor_int, sqrt_padic

Form = tuple[int, int, int]
DEFAULT_ENUMERATION_BOUND = 10**7


class DiscriminantTooLarge(ValueError):
    pass


def identity_form(D: int) -> Form:
    b = D % 2
    return (1, b, (b * b - D) // 4)


def is_reduced(f: Form) -> bool:
    a, b, c = f
    if not (abs(b) <= a <= c):
        return False
    if (abs(b) == a or a == c) and b < 0:
        return False
    return True


def reduce_form(f: Form) -> Form:
    return kernels.bqf_reduce(*f)


def compose(f: Form, g: Form) -> Form:
    return kernels.bqf_compose(f, g)


def inverse(f: Form) -> Form:
    a, b, c = f
    return reduce_form((a, -b, c))


def power(f: Form, k: int, D: int) -> Form:
    if k < 0:
        f, k = inverse(f), -k
    out = identity_form(D)
    while k:
        if k & 1:
            out = compose(out, f)
        f = compose(f, f)
        k >>= 1
    return out


def reduced_forms(D: int) -> list[Form]:
    """All primitive reduced forms of discriminant D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("need a negative discriminant D = 0, 1 mod 4")
    out = []
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
    return out


@dataclass
class ClassGroupBQF:
    disc: int
    forms: list[Form]
    invariants: list[int]  # d_1 | d_2 | ... with prod = h

    @property
    def order(self) -> int:
        return len(self.forms)

    def identity(self) -> Form:
        return identity_form(self.disc)

    def compose(self, f: Form, g: Form) -> Form:
        return compose(f, g)

    def to_json(self) -> dict:
        return {
            "disc": str(self.disc),
            "h": str(self.order),
            "invariants": [str(x) for x in self.invariants],
        }


def _torsion_count(forms: list[Form], m: int, D: int) -> int:
    e = identity_form(D)
    return sum(1 for f in forms if power(f, m, D) == e)


def _invariants(forms: list[Form], D: int) -> list[int]:
    """Invariant factors from |G[l^k]| for each prime l | h."""
    h = len(forms)
    if h == 1:
        return []
    per_prime: dict[int, list[int]] = {}
    for ell, e in factor_int(h).items():
        # ranks r_k = #{cyclic factors of order >= l^k}
        counts = [1]
        k = 0
        while counts[-1] < ell**e:
            k += 1
            counts.append(_torsion_count(forms, ell**k, D))
        ranks = [round(math.log(counts[i] // counts[i - 1], ell)) for i in range(1, len(counts))]
        exps = []
        for i, r in enumerate(ranks):
            nxt = ranks[i + 1] if i + 1 < len(ranks) else 0
            exps += [i + 1] * (r - nxt)
        per_prime[ell] = sorted(exps, reverse=True)
    width = max(len(v) for v in per_prime.values())
    inv = [1] * width
    for ell, exps in per_prime.items():
        for i, x in enumerate(exps):
            inv[i] *= ell**x
    return sorted(inv)


def class_group_bqf(D: int, bound: int = DEFAULT_ENUMERATION_BOUND) -> ClassGroupBQF:
    if -D > bound:
        raise DiscriminantTooLarge(f"|{D}| exceeds the enumeration bound {bound}")
    forms = reduced_forms(D)
    return ClassGroupBQF(D, forms, _invariants(forms, D))


def n_rank(cg: ClassGroupBQF, n: int) -> int:
    if n < 2:
        raise ValueError("n >= 2")
    return sum(1 for x in cg.invariants if x % n == 0)


# -- ideals as forms --------------------------------------------------------------


def prime_form(D: int, q: int, kind: str, sign: int = 0, root: int | None = None) -> Form:
    """Form of the prime ideal above q.

    A form (a, b, c) stands for the ideal a Z + (-b + sqrt D)/2 Z. At a split prime
    the ideal with sqrt(d) = sign * root is chosen, ``root`` being a q-adic square
    root of d = D or D/4.
    """
    d = D if D % 4 == 1 else D // 4
    s = 1 if D % 4 == 1 else 2
    if kind == "inert":
        raise ValueError("inert primes are principal")
    if kind == "ramified":
        if q == 2:
            b = 0 if (D // 4) % 4 == 2 else 2
        else:
            b = q if D % 2 else 0
        return reduce_form((q, b, (b * b - D) // (4 * q)))
    if root is None:
        root = sqrt_padic(d % q**3, q, 3)
    r = sign * root
    if q == 2:
        b = r % 4
    else:
        b = (s * r) % q
        if (b - D) % 2:
            b += q
    return reduce_form((q, b, (b * b - D) // (4 * q)))


def ideal_form(D: int, exponents: dict, roots: dict[int, int]) -> Form:
    """prod P^e as a reduced form; keys are PrimeOfL-like objects with q, kind, sign."""
    out = identity_form(D)
    for P, e in sorted(exponents.items(), key=lambda kv: (kv[0].q, kv[0].sign)):
        if e == 0 or P.kind == "inert":
            continue
        f = prime_form(D, P.q, P.kind, P.sign, roots.get(P.q))
        out = compose(out, power(f, e, D))
    return out


@dataclass
class RankWitness:
    disc: int
    forms: list[Form]
    n: int
    orders_ok: bool
    independent: bool

    @property
    def rank_lower_bound(self) -> int:
        return len(self.forms) if self.orders_ok and self.independent else 0

    def to_json(self) -> dict:
        return {
            "forms": [[str(x) for x in f] for f in self.forms],
            "orders_ok": self.orders_ok,
            "independent": self.independent,
            "rank_lower_bound": str(self.rank_lower_bound),
        }


def witness_rank(D: int, forms: list[Form], n: int) -> RankWitness:
    """Check f^n = 1 for every form and prod f_i^{e_i} != 1 for all nonzero e mod n."""
    e = identity_form(D)
    orders_ok = all(power(f, n, D) == e for f in forms)
    independent = True
    for coeffs in itertools.product(range(n), repeat=len(forms)):
        if not any(coeffs):
            continue
        acc = e
        for c, f in zip(coeffs, forms):
            acc = compose(acc, power(f, c, D))
        if acc == e:
            independent = False
            break
    return RankWitness(D, list(forms), n, orders_ok, independent)
