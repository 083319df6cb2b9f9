"""Exact scalar domains: Z, Q, Z/m and Z localized at finitely many primes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction]


class DomainError(ArithmeticError):
    """Raised on a division or coercion that the scalar domain does not allow."""


def _prime_support(n: int) -> set[int]:
    n = abs(n)
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def normalize(x: Scalar) -> Scalar:
    """Collapse integral fractions to ``int`` so equal values compare and hash alike."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


@dataclass(frozen=True)
class ScalarDomain:
    kind: str  # "Z", "Q", "Zmod", "Zloc"
    modulus: int = 0
    primes: frozenset = frozenset()

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Zmod", "Zloc"):
            raise ValueError(f"unknown scalar domain kind {self.kind!r}")
        if self.kind == "Zmod" and self.modulus < 2:
            raise ValueError("IntegersMod needs m >= 2")
        if self.kind == "Zloc":
            for p in self.primes:
                if p < 2 or _prime_support(p) != {p}:
                    raise ValueError(f"{p} is not a prime")

    # constructors -------------------------------------------------------
    @classmethod
    def integers(cls) -> "ScalarDomain":
        return cls("Z")

    @classmethod
    def rationals(cls) -> "ScalarDomain":
        return cls("Q")

    @classmethod
    def mod(cls, m: int) -> "ScalarDomain":
        return cls("Zmod", modulus=m)

    @classmethod
    def localized(cls, *primes: int) -> "ScalarDomain":
        return cls("Zloc", primes=frozenset(primes))

    @classmethod
    def invert_integer(cls, k: int) -> "ScalarDomain":
        """Z[1/k]."""
        return cls.localized(*sorted(_prime_support(k)))

    # basic queries -------------------------------------------------------
    @property
    def is_field(self) -> bool:
        if self.kind == "Q":
            return True
        return self.kind == "Zmod" and _prime_support(self.modulus) == {self.modulus}

    @property
    def characteristic(self) -> int:
        return self.modulus if self.kind == "Zmod" else 0

    def __str__(self) -> str:
        if self.kind == "Z":
            return "Z"
        if self.kind == "Q":
            return "Q"
        if self.kind == "Zmod":
            return f"Z/{self.modulus}"
        return "Z[1/" + "".join(str(p) for p in sorted(self.primes)) + "]"

    def _allowed_denominator(self, q: int) -> bool:
        return _prime_support(q) <= set(self.primes)

    def coerce(self, x) -> Scalar:
        """Map an int/Fraction (or decimal string ``"p/q"``) into this domain."""
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
            raise TypeError(f"not an exact scalar: {x!r}")
        x = normalize(x)
        if self.kind == "Q":
            return x
        if self.kind == "Z":
            if isinstance(x, Fraction):
                raise DomainError(f"{x} is not an integer")
            return x
        if self.kind == "Zmod":
            if isinstance(x, Fraction):
                den_inv = pow(x.denominator, -1, self.modulus) if math.gcd(x.denominator, self.modulus) == 1 else None
                if den_inv is None:
                    raise DomainError(f"{x} has no image in {self}")
                return (x.numerator * den_inv) % self.modulus
            return x % self.modulus
        if isinstance(x, Fraction) and not self._allowed_denominator(x.denominator):
            raise DomainError(f"{x} is not in {self}")
        return x

    @property
    def zero(self) -> Scalar:
        return 0

    @property
    def one(self) -> Scalar:
        return 1 if self.kind != "Zmod" else 1 % self.modulus

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        s = a + b
        return s % self.modulus if self.kind == "Zmod" else normalize(s)

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        s = a - b
        return s % self.modulus if self.kind == "Zmod" else normalize(s)

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        s = a * b
        return s % self.modulus if self.kind == "Zmod" else normalize(s)

    def neg(self, a: Scalar) -> Scalar:
        return (-a) % self.modulus if self.kind == "Zmod" else -a

    def is_zero(self, a: Scalar) -> bool:
        return a == 0

    def is_unit(self, a: Scalar) -> bool:
        if a == 0:
            return False
        if self.kind == "Q":
            return True
        if self.kind == "Z":
            return a in (1, -1)
        if self.kind == "Zmod":
            return math.gcd(a, self.modulus) == 1
        a = Fraction(a)
        return self._allowed_denominator(abs(a.numerator))

    def inv(self, a: Scalar) -> Scalar:
        if not self.is_unit(a):
            raise DomainError(f"{a} is not a unit in {self}")
        if self.kind == "Zmod":
            return pow(a, -1, self.modulus)
        if self.kind == "Z":
            return a
        return normalize(Fraction(1) / a)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        """Exact division; ``a`` need only be divisible by ``b`` (``b`` need not be a unit)."""
        if b == 0:
            raise DomainError("division by zero")
        if self.kind == "Zmod":
            return self.mul(a, self.inv(b))
        q = normalize(Fraction(a) / b)
        return self.coerce(q)

    def from_int(self, n: int) -> Scalar:
        return self.coerce(n)


Z = ScalarDomain.integers()
Q = ScalarDomain.rationals()


def scalar_to_str(x: Scalar) -> str:
    x = normalize(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def scalar_from_str(s: str) -> Scalar:
    return normalize(Fraction(s))
