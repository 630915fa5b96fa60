"""Generalized Heisenberg groups Heis_{2d+1}(Z/nZ) and their mu_n-twist.

An element is stored as a triple (a, b, c): a row vector a and a column
vector b of length d, and a central coordinate c, all reduced mod n. The
(d+2)x(d+2) unipotent matrix form is only materialised by ``to_matrix`` for
cross-checks.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterator

from heistorsor.arith.integers import crt, factor_int


class GroupMismatch(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class HeisElement:
    a: tuple[int, ...]
    b: tuple[int, ...]
    c: int
    n: int

    @property
    def d(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class HeisGroup:
    n: int
    d: int

    def __post_init__(self):
        if self.n < 2 or self.d < 1:
            raise ValueError("need n >= 2 and d >= 1")

    # -- construction ---------------------------------------------------
    def element(self, a, b, c) -> HeisElement:
        a, b = tuple(x % self.n for x in a), tuple(x % self.n for x in b)
        if len(a) != self.d or len(b) != self.d:
            raise ValueError(f"vectors must have length {self.d}")
        return HeisElement(a, b, c % self.n, self.n)

    @property
    def identity(self) -> HeisElement:
        z = (0,) * self.d
        return HeisElement(z, z, 0, self.n)

    def elements(self) -> Iterator[HeisElement]:
        r = range(self.n)
        for a in itertools.product(r, repeat=self.d):
            for b in itertools.product(r, repeat=self.d):
                for c in r:
                    yield HeisElement(a, b, c, self.n)

    def random_element(self, rng: random.Random) -> HeisElement:
        n, d = self.n, self.d
        return HeisElement(
            tuple(rng.randrange(n) for _ in range(d)),
            tuple(rng.randrange(n) for _ in range(d)),
            rng.randrange(n),
            n,
        )

    def _own(self, *gs: HeisElement):
        for g in gs:
            if g.n != self.n or len(g.a) != self.d:
                raise GroupMismatch(f"element of Heis(n={g.n}, d={len(g.a)}) used in {self}")

    # -- group law --------------------------------------------------------
    def mul(self, g: HeisElement, h: HeisElement) -> HeisElement:
        self._own(g, h)
        n = self.n
        dot = sum(x * y for x, y in zip(g.a, h.b))
        return HeisElement(
            tuple((x + y) % n for x, y in zip(g.a, h.a)),
            tuple((x + y) % n for x, y in zip(g.b, h.b)),
            (g.c + h.c + dot) % n,
            n,
        )

    def inv(self, g: HeisElement) -> HeisElement:
        self._own(g)
        n = self.n
        dot = sum(x * y for x, y in zip(g.a, g.b))
        return HeisElement(
            tuple(-x % n for x in g.a), tuple(-x % n for x in g.b), (-g.c + dot) % n, n
        )

    def power(self, g: HeisElement, k: int) -> HeisElement:
        if k < 0:
            g, k = self.inv(g), -k
        out, base = self.identity, g
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def commutator(self, g: HeisElement, h: HeisElement) -> HeisElement:
        """g h g^-1 h^-1; always central with c = a.b' - a'.b."""
        return self.mul(self.mul(g, h), self.mul(self.inv(g), self.inv(h)))

    def element_order(self, g: HeisElement) -> int:
        self._own(g)
        k, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k

    def order(self) -> int:
        return self.n ** (2 * self.d + 1)

    # -- exact sequence 0 -> Z/n -> Heis -> (Z/n)^2d -> 0 ----------------
    def project(self, g: HeisElement) -> tuple[int, ...]:
        self._own(g)
        return g.a + g.b

    def embed_center(self, c: int) -> HeisElement:
        z = (0,) * self.d
        return HeisElement(z, z, c % self.n, self.n)

    def is_central(self, g: HeisElement) -> bool:
        return all(self.mul(g, h) == self.mul(h, g) for h in self.generators())

    def generators(self) -> list[HeisElement]:
        out = []
        for i in range(self.d):
            e = tuple(1 if j == i else 0 for j in range(self.d))
            z = (0,) * self.d
            out.append(HeisElement(e, z, 0, self.n))
            out.append(HeisElement(z, e, 0, self.n))
        out.append(self.embed_center(1))
        return out

    # -- twist by (Z/n)^x, modelling Heis(mu_n) ---------------------------
    def twist_apply(self, t: int, g: HeisElement) -> HeisElement:
        """(a, b, c) -> (t a, t b, t^2 c): the Galois action through mu_n coordinates."""
        self._own(g)
        n = self.n
        if math.gcd(t, n) != 1:
            raise ValueError(f"twist {t} is not a unit mod {n}")
        return HeisElement(
            tuple(t * x % n for x in g.a), tuple(t * x % n for x in g.b), t * t * g.c % n, n
        )

    # -- matrix oracle ------------------------------------------------------
    def to_matrix(self, g: HeisElement) -> list[list[int]]:
        d = self.d
        m = [[int(i == j) for j in range(d + 2)] for i in range(d + 2)]
        for j in range(d):
            m[0][1 + j] = g.a[j]
            m[1 + j][d + 1] = g.b[j]
        m[0][d + 1] = g.c
        return m

    def from_matrix(self, m: list[list[int]]) -> HeisElement:
        d = self.d
        return self.element([m[0][1 + j] for j in range(d)], [m[1 + j][d + 1] for j in range(d)], m[0][d + 1])


def matmul_mod(x: list[list[int]], y: list[list[int]], n: int) -> list[list[int]]:
    k = len(y)
    return [[sum(r[t] * y[t][j] for t in range(k)) % n for j in range(len(y[0]))] for r in x]


def group_order(G: HeisGroup) -> int:
    return G.order()


# -- CRT splitting ---------------------------------------------------------


def crt_split(g: HeisElement, p: int, q: int) -> tuple[HeisElement, HeisElement]:
    if math.gcd(p, q) != 1:
        raise ValueError(f"{p} and {q} are not coprime")
    if p * q != g.n:
        raise GroupMismatch(f"{p}*{q} != {g.n}")

    def red(m: int) -> HeisElement:
        return HeisElement(tuple(x % m for x in g.a), tuple(x % m for x in g.b), g.c % m, m)

    return red(p), red(q)


def crt_combine(gp: HeisElement, gq: HeisElement) -> HeisElement:
    p, q = gp.n, gq.n
    if math.gcd(p, q) != 1:
        raise ValueError(f"{p} and {q} are not coprime")

    def lift(x: int, y: int) -> int:
        return crt([x, y], [p, q])[0]

    return HeisElement(
        tuple(lift(x, y) for x, y in zip(gp.a, gq.a)),
        tuple(lift(x, y) for x, y in zip(gp.b, gq.b)),
        lift(gp.c, gq.c),
        p * q,
    )


# -- general symplectic group order ------------------------------------------


def gsp_order(g: int, n: int) -> int:
    """#GSp_2g(Z/nZ), multiplicative over prime powers of n."""
    if g < 1 or n < 2:
        raise ValueError("need g >= 1 and n >= 2")
    dim = 2 * g * g + g + 1
    total = 1
    for p, k in factor_int(n).items():
        sp = p ** (g * g)
        for i in range(1, g + 1):
            sp *= p ** (2 * i) - 1
        total *= (p - 1) * sp * p ** ((k - 1) * dim)
    return total


# -- structural verification ---------------------------------------------------


def check_structure(G: HeisGroup, exhaustive: bool = True, samples: int = 10_000, seed: int = 0) -> dict:
    """Verify the group axioms and the central extension structure.

    Exhaustive mode checks every pair against matrix multiplication (an
    injective homomorphism into GL_{d+2} makes associativity inherited) and
    every triple directly when |G|^3 is small; sampled mode draws ``samples``
    random triples.
    """
    rng = random.Random(seed)
    n, d = G.n, G.d
    e = G.identity
    checks: dict[str, bool] = {}
    if exhaustive:
        elems = list(G.elements())
        mats = {g: G.to_matrix(g) for g in elems}
        checks["matrix_injective"] = len({str(m) for m in mats.values()}) == len(elems)
        hom = True
        for g in elems:
            for h in elems:
                if G.to_matrix(G.mul(g, h)) != matmul_mod(mats[g], mats[h], n):
                    hom = False
                    break
            if not hom:
                break
        checks["matrix_homomorphism"] = hom
        if len(elems) ** 3 <= 50_000:
            checks["associative"] = all(
                G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z)) for x in elems for y in elems for z in elems
            )
        else:
            checks["associative"] = hom and checks["matrix_injective"]
        pool = elems
    else:
        pool = [G.random_element(rng) for _ in range(samples)]
        ok = True
        for _ in range(samples):
            x, y, z = (G.random_element(rng) for _ in range(3))
            if G.mul(G.mul(x, y), z) != G.mul(x, G.mul(y, z)):
                ok = False
                break
            if G.to_matrix(G.mul(x, y)) != matmul_mod(G.to_matrix(x), G.to_matrix(y), n):
                ok = False
                break
        checks["associative"] = ok
    checks["identity"] = all(G.mul(e, g) == g == G.mul(g, e) for g in pool)
    checks["inverse"] = all(G.mul(g, G.inv(g)) == e == G.mul(G.inv(g), g) for g in pool)

    # center: exactly the (0, 0, c), cyclic of order n
    gens = G.generators()
    if exhaustive:
        center = [g for g in pool if all(G.mul(g, h) == G.mul(h, g) for h in gens)]
    else:
        center = [G.embed_center(c) for c in range(n)]
        center_ok = all(G.is_central(g) for g in center) and not any(
            G.is_central(g) for g in pool if any(g.a) or any(g.b)
        )
        checks["center_sampled"] = center_ok
    checks["center_is_c_axis"] = all(not any(g.a) and not any(g.b) for g in center) and len(center) == n
    checks["center_cyclic"] = G.element_order(G.embed_center(1)) == n

    # exactness of 0 -> Z/n -> G -> (Z/n)^{2d} -> 0
    zero = (0,) * (2 * d)
    emb_injective = len({G.embed_center(c) for c in range(n)}) == n
    hom_proj = all(
        G.project(G.mul(x, y)) == tuple((s + t) % n for s, t in zip(G.project(x), G.project(y)))
        for x, y in zip(pool, pool[1:] + pool[:1])
    )
    if exhaustive:
        kernel = [g for g in pool if G.project(g) == zero]
        image = {G.project(g) for g in pool}
        middle = sorted(kernel, key=lambda g: g.c) == [G.embed_center(c) for c in range(n)]
        surjective = len(image) == n ** (2 * d)
    else:
        middle = all(G.project(G.embed_center(c)) == zero for c in range(n))
        surjective = True
    checks["exact_sequence"] = emb_injective and hom_proj and middle and surjective

    # exponent, metabelian witness
    orders = [G.element_order(g) for g in pool]
    exponent = math.lcm(*orders)
    checks["commutators_central"] = all(
        not any(G.commutator(x, y).a) and not any(G.commutator(x, y).b) for x, y in zip(pool, reversed(pool))
    )
    units = [t for t in range(1, n) if math.gcd(t, n) == 1]
    tw = True
    for i, (x, y) in enumerate(zip(pool, reversed(pool))):
        t = units[i % len(units)]
        s = units[(3 * i + 1) % len(units)]
        if G.twist_apply(t, G.mul(x, y)) != G.mul(G.twist_apply(t, x), G.twist_apply(t, y)):
            tw = False
        if G.twist_apply(t, G.twist_apply(s, x)) != G.twist_apply(t * s % n, x):
            tw = False
        if i > 2000:
            break
    checks["twist_automorphism"] = tw
    if n % 2 == 1:
        checks["exponent_n"] = exponent == n
    return {
        "n": n,
        "d": d,
        "order": G.order(),
        "counted_order": len(pool) if exhaustive else None,
        "exponent": exponent,
        "center_order": len(center),
        "exact_sequence": checks["exact_sequence"],
        "checks": checks,
        "ok": all(checks.values()) and (not exhaustive or len(pool) == G.order()),
    }
