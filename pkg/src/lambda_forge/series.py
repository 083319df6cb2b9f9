"""Truncated univariate power series A[[U]] / (U^{N+1}) over an exact scalar domain."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .scalars import Q, Z, DomainError, Scalar, ScalarDomain, scalar_from_str, scalar_to_str


class OrderMismatchWarning(UserWarning):
    """Two series of different truncation orders were combined."""


def binom(n: int, k: int) -> int:
    """Binomial coefficient C(n, k) for any integer ``n`` (generalized for n < 0)."""
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k)
    return (-1) ** k * math.comb(k - n - 1, k)


def _binom_row(n: int, upto: int) -> list[int]:
    row = [1]
    c = 1
    for i in range(1, upto + 1):
        c = c * (n - i + 1) // i
        row.append(c)
    return row


@dataclass(frozen=True, eq=False)
class TruncSeries:
    domain: ScalarDomain
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a truncated series needs order >= 0")
        object.__setattr__(self, "coeffs", tuple(self.domain.coerce(c) for c in self.coeffs))

    # construction -------------------------------------------------------
    @classmethod
    def from_coeffs(cls, coeffs: Iterable, order: int | None = None, domain: ScalarDomain = Q) -> "TruncSeries":
        cs = list(coeffs)
        if order is None:
            order = len(cs) - 1
        cs = (cs + [0] * (order + 1))[: order + 1]
        return cls(domain, tuple(cs))

    @classmethod
    def zero(cls, order: int, domain: ScalarDomain = Q) -> "TruncSeries":
        return cls(domain, (0,) * (order + 1))

    @classmethod
    def constant(cls, c, order: int, domain: ScalarDomain = Q) -> "TruncSeries":
        return cls.from_coeffs([c], order, domain)

    @classmethod
    def monomial(cls, n: int, order: int, domain: ScalarDomain = Q, c=1) -> "TruncSeries":
        cs = [0] * (order + 1)
        if n <= order:
            cs[n] = c
        return cls(domain, tuple(cs))

    @classmethod
    def one_plus_u_power(cls, k: int, order: int, domain: ScalarDomain = Q) -> "TruncSeries":
        """(1+U)^k for any integer k."""
        return cls(domain, tuple(_binom_row(k, order)))

    # basic accessors ----------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> Scalar:
        return self.coeffs[i]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.domain, self.coeffs))

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("U" if i == 1 else f"U^{i}")
            cs = scalar_to_str(c)
            if mono and c == 1:
                terms.append(mono)
            elif mono:
                terms.append(f"({cs}){mono}" if "/" in cs or cs.startswith("-") else f"{cs}{mono}")
            else:
                terms.append(cs)
        body = " + ".join(terms) if terms else "0"
        return f"<{body} + O(U^{self.order + 1}) over {self.domain}>"

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise ValueError(f"cannot raise truncation order {self.order} to {order}")
        return TruncSeries(self.domain, self.coeffs[: order + 1])

    def change_domain(self, domain: ScalarDomain) -> "TruncSeries":
        return TruncSeries(domain, self.coeffs)

    # arithmetic ---------------------------------------------------------
    def _align(self, other: "TruncSeries") -> tuple["TruncSeries", "TruncSeries"]:
        if self.domain != other.domain:
            raise DomainError(f"domain mismatch: {self.domain} vs {other.domain}")
        if self.order != other.order:
            warnings.warn(
                f"mixing orders {self.order} and {other.order}; truncating to {min(self.order, other.order)}",
                OrderMismatchWarning,
                stacklevel=3,
            )
            m = min(self.order, other.order)
            return self.truncate(m), other.truncate(m)
        return self, other

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            return self + TruncSeries.constant(other, self.order, self.domain)
        a, b = self._align(other)
        d = a.domain
        return TruncSeries(d, tuple(d.add(x, y) for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.domain, tuple(self.domain.neg(c) for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncSeries":
        d = self.domain
        c = d.coerce(c)
        return TruncSeries(d, tuple(d.mul(c, x) for x in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        a, b = self._align(other)
        return series_mul(a, b)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncSeries":
        if k < 0:
            return series_invert(self) ** (-k)
        out = TruncSeries.constant(1, self.order, self.domain)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derivative(self) -> "TruncSeries":
        """f' at order N-1."""
        if self.order == 0:
            raise ValueError("derivative of an order-0 series has no retained coefficients")
        d = self.domain
        return TruncSeries(d, tuple(d.mul(n, self.coeffs[n]) for n in range(1, self.order + 1)))

    def integral(self, constant=0) -> "TruncSeries":
        """Antiderivative at order N+1; requires division by 1..N+1."""
        d = self.domain
        cs = [constant] + [d.div(c, n + 1) for n, c in enumerate(self.coeffs)]
        return TruncSeries(d, tuple(cs))

    def compose(self, g: "TruncSeries") -> "TruncSeries":
        """f(g) for g with zero constant term."""
        if g[0] != 0:
            raise ValueError("inner series must have zero constant term")
        a, g = self._align(g)
        out = TruncSeries.zero(a.order, a.domain)
        for c in reversed(a.coeffs):
            out = out * g + c
        return out

    # serialization -------------------------------------------------------
    def to_json(self) -> list[str]:
        return [scalar_to_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str], domain: ScalarDomain = Q) -> "TruncSeries":
        return cls(domain, tuple(scalar_from_str(s) for s in data))


def series_mul(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    if f.domain != g.domain:
        raise DomainError(f"domain mismatch: {f.domain} vs {g.domain}")
    n = min(f.order, g.order)
    d = f.domain
    a, b = f.coeffs, g.coeffs
    out = []
    for k in range(n + 1):
        s = 0
        for i in range(k + 1):
            ai = a[i]
            if ai:
                s += ai * b[k - i]
        out.append(d.coerce(s))
    return TruncSeries(d, tuple(out))


def series_invert(f: TruncSeries) -> TruncSeries:
    d = f.domain
    a0 = f[0]
    if not d.is_unit(a0):
        raise DomainError(f"constant term {a0} is not a unit in {d}")
    inv0 = d.inv(a0)
    out = [inv0]
    for n in range(1, f.order + 1):
        s = 0
        for i in range(1, n + 1):
            s += f[i] * out[n - i]
        out.append(d.mul(d.neg(d.coerce(s)), inv0))
    return TruncSeries(d, tuple(out))


def series_log1p(f: TruncSeries) -> TruncSeries:
    """log(f) for f = 1 + g with g(0) = 0."""
    if f[0] != 1:
        raise ValueError("log1p expects a series with constant term 1")
    if f.order == 0:
        return TruncSeries.zero(0, f.domain)
    q = f.derivative() * series_invert(f.truncate(f.order - 1))
    return q.integral(0)


def series_exp(f: TruncSeries) -> TruncSeries:
    if f[0] != 0:
        raise ValueError("exp expects a series with zero constant term")
    d = f.domain
    h = [d.one]
    for n in range(1, f.order + 1):
        s = 0
        for k in range(1, n + 1):
            s += k * f[k] * h[n - k]
        h.append(d.div(s, n))
    return TruncSeries(d, tuple(h))


def to_binomial_basis(f: TruncSeries) -> tuple:
    """Coefficients alpha with f = sum_j alpha_j (1+U)^j mod U^{N+1}."""
    d = f.domain
    n = f.order
    alpha = []
    for j in range(n + 1):
        s = 0
        for m in range(j, n + 1):
            if f[m]:
                s += (-1) ** (m - j) * math.comb(m, j) * f[m]
        alpha.append(d.coerce(s))
    return tuple(alpha)


def from_binomial_basis(
    alpha: Mapping[int, Scalar] | Sequence[Scalar],
    order: int,
    domain: ScalarDomain = Q,
    allow_negative: bool = False,
) -> TruncSeries:
    """sum_j alpha_j (1+U)^j truncated at ``order``; exponents may exceed the order."""
    items = alpha.items() if isinstance(alpha, Mapping) else enumerate(alpha)
    acc = [0] * (order + 1)
    for j, a in items:
        if not a:
            continue
        if j < 0 and not allow_negative:
            raise ValueError(f"negative exponent {j} needs allow_negative=True")
        for i, c in enumerate(_binom_row(j, order)):
            acc[i] += a * c
    return TruncSeries(domain, tuple(domain.coerce(c) for c in acc))


def log_power_basis(order: int) -> list[TruncSeries]:
    """p_n = log(1+U)^n / n! for n = 0..order, over Q."""
    l1 = series_log1p(TruncSeries.from_coeffs([1, 1], order, Q))
    out = [TruncSeries.constant(1, order, Q)]
    for n in range(1, order + 1):
        out.append((out[-1] * l1).scale(Fraction(1, n)))
    return out


__all__ = [
    "OrderMismatchWarning",
    "TruncSeries",
    "binom",
    "from_binomial_basis",
    "log_power_basis",
    "series_exp",
    "series_invert",
    "series_log1p",
    "series_mul",
    "to_binomial_basis",
    "Q",
    "Z",
]
