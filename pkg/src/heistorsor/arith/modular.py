"""Residue rings Z/mZ, prime fields, and the coefficient-ring descriptors used by Poly."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from heistorsor.arith.integers import is_prime


class DomainMismatch(TypeError):
    """Operands live in different coefficient domains."""


@dataclass(frozen=True, slots=True)
class ModInt:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, ModInt):
            if other.modulus != self.modulus:
                raise DomainMismatch(f"moduli {self.modulus} and {other.modulus}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return type(self)(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return type(self)(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        return type(self)(o - self.value, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        return type(self)(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return type(self)(-self.value, self.modulus)

    def __pow__(self, k: int):
        return type(self)(pow(self.value, k, self.modulus), self.modulus)

    def is_unit(self) -> bool:
        from math import gcd

        return gcd(self.value, self.modulus) == 1

    def inverse(self):
        return type(self)(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * type(self)(o, self.modulus).inverse()

    def __eq__(self, other):
        if isinstance(other, ModInt):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} mod {self.modulus}"


class PrimeFieldElt(ModInt):
    """Element of F_p; the modulus is checked prime on construction."""

    __slots__ = ()

    def __post_init__(self):
        super().__post_init__()
        if not _prime_cached(self.modulus):
            raise ValueError(f"{self.modulus} is not prime")

    def order(self) -> int:
        if self.value == 0:
            raise ZeroDivisionError("0 has no multiplicative order")
        k, x = 1, self.value
        while x != 1:
            x = x * self.value % self.modulus
            k += 1
        return k


_PRIME_CACHE: dict[int, bool] = {}


def _prime_cached(p: int) -> bool:
    r = _PRIME_CACHE.get(p)
    if r is None:
        r = _PRIME_CACHE[p] = is_prime(p)
    return r


# ---------------------------------------------------------------------------
# Coefficient rings for Poly. Elements are plain ints (Z/mZ) or Fractions (Q).


class Ring:
    is_field = False
    characteristic = 0

    def convert(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        return x == 0


class RationalField(Ring):
    is_field = True
    characteristic = 0

    def convert(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, ModInt):
            raise DomainMismatch("cannot coerce a residue into Q")
        return Fraction(x)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / x

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class IntegersMod(Ring):
    def __init__(self, m: int):
        if m < 2:
            raise ValueError("modulus must be >= 2")
        self.m = m
        self.characteristic = m

    def convert(self, x):
        if isinstance(x, int):
            return x % self.m
        if isinstance(x, Fraction):
            den = x.denominator % self.m
            try:
                return x.numerator * pow(den, -1, self.m) % self.m
            except ValueError:
                raise ZeroDivisionError(f"denominator {x.denominator} not invertible mod {self.m}") from None
        if isinstance(x, ModInt):
            if x.modulus != self.m:
                raise DomainMismatch(f"moduli {x.modulus} and {self.m}")
            return x.value
        raise DomainMismatch(f"cannot coerce {x!r} into Z/{self.m}")

    def inv(self, x):
        try:
            return pow(x, -1, self.m)
        except ValueError:
            raise ZeroDivisionError(f"{x} not invertible mod {self.m}") from None

    def __eq__(self, other):
        return isinstance(other, IntegersMod) and other.m == self.m

    def __hash__(self):
        return hash(("Zmod", self.m))

    def __repr__(self):
        return f"Z/{self.m}"


class PrimeField(IntegersMod):
    is_field = True

    def __init__(self, p: int):
        if not _prime_cached(p):
            raise ValueError(f"{p} is not prime")
        super().__init__(p)
        self.p = p

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()
_GF_CACHE: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    f = _GF_CACHE.get(p)
    if f is None:
        f = _GF_CACHE[p] = PrimeField(p)
    return f
