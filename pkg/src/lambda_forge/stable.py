"""The log basis p_n = log(1+U)^n / n!, sigma / Sigma, and stable Adams operations.

sigma((a_n)) = sum a_n p_n turns the shift of sequences into Omega and the
pointwise product into star-composition.  A stable element is a window
function m -> a_m on Z; its level-l series is sigma(a_{-l}, a_{1-l}, ...),
so that Omega(level l+1) = level l.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from .operations import AdditiveOpSeries, star_compose
from .scalars import Q, normalize, scalar_to_str
from .series import TruncSeries, log_power_basis
from .towers import omega_apply


@lru_cache(maxsize=64)
def _basis(N: int) -> tuple:
    return tuple(log_power_basis(N))


def p_basis(n: int, N: int) -> TruncSeries:
    return _basis(N)[n] if n <= N else TruncSeries.zero(N, Q)


def sigma(a: Sequence, N: int) -> TruncSeries:
    """sum a_n p_n mod U^{N+1}; terms with n > N vanish at this truncation."""
    basis = _basis(N)
    coeffs = [Fraction(0)] * (N + 1)
    for n, an in enumerate(a):
        if n > N:
            break
        if an:
            for i in range(n, N + 1):
                coeffs[i] += an * basis[n][i]
    return TruncSeries(Q, tuple(normalize(c) for c in coeffs))


def sigma_inverse(f: TruncSeries) -> list:
    """The unique a_0..a_N with sigma(a) = f; p_n = U^n/n! + higher terms."""
    N = f.order
    basis = _basis(N)
    rest = [Fraction(c) for c in f.change_domain(Q).coeffs]
    out = []
    for n in range(N + 1):
        an = rest[n] / Fraction(basis[n][n])
        out.append(normalize(an))
        if an:
            for i in range(n, N + 1):
                rest[i] -= an * basis[n][i]
    return out


def shift(a: Sequence) -> list:
    return list(a[1:])


# stable elements ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StableElement:
    """A window function on Z, materialized on [-depth, order].

    ``order`` is the series truncation N and ``depth`` the number of levels;
    level l only reads a_m for -l <= m <= N - l.
    """

    values: Mapping  # m -> Fraction for -depth <= m <= order
    order: int
    depth: int
    label: str = ""

    @classmethod
    def from_function(cls, fn: Callable[[int], object], order: int, depth: int, label: str = "") -> "StableElement":
        vals = {m: normalize(Fraction(fn(m))) for m in range(-depth, order + 1)}
        return cls(vals, order, depth, label)

    @classmethod
    def from_window(cls, window: Mapping, order: int, depth: int, label: str = "") -> "StableElement":
        """Finitely supported window; support must lie in [-depth, order]."""
        for m in window:
            if not -depth <= m <= order:
                raise ValueError(f"window index {m} outside [-{depth}, {order}]")
        return cls.from_function(lambda m: window.get(m, 0), order, depth, label)

    def __getitem__(self, m: int):
        return self.values.get(m, 0)

    def level(self, l: int) -> TruncSeries:
        if not 0 <= l <= self.depth:
            raise ValueError(f"level {l} outside 0..{self.depth}")
        return sigma([self[j - l] for j in range(self.order + 1)], self.order)

    def levels(self) -> list:
        return [self.level(l) for l in range(self.depth + 1)]

    def _check(self, other: "StableElement"):
        if (self.order, self.depth) != (other.order, other.depth):
            raise ValueError("stable elements with different order/depth")

    def __add__(self, other: "StableElement") -> "StableElement":
        self._check(other)
        return StableElement({m: normalize(self[m] + other[m]) for m in self.values}, self.order, self.depth)

    def __sub__(self, other: "StableElement") -> "StableElement":
        self._check(other)
        return StableElement({m: normalize(self[m] - other[m]) for m in self.values}, self.order, self.depth)

    def scale(self, c) -> "StableElement":
        return StableElement({m: normalize(c * v) for m, v in self.values.items()}, self.order, self.depth)

    def __eq__(self, other):
        if not isinstance(other, StableElement):
            return NotImplemented
        return (self.order, self.depth) == (other.order, other.depth) and all(
            self[m] == other[m] for m in self.values
        )

    def __repr__(self):
        name = self.label or "StableElement"
        return f"<{name} N={self.order} D={self.depth}>"

    def omega_compatible(self) -> bool:
        lv = self.levels()
        return all(omega_apply(lv[l + 1]) == lv[l].truncate(self.order - 1) for l in range(self.depth))

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "order": self.order,
            "depth": self.depth,
            "window": [{"index": m, "value": scalar_to_str(v)} for m, v in sorted(self.values.items()) if v],
            "levels": [g.to_json() for g in self.levels()],
        }


def identity(order: int, depth: int) -> StableElement:
    return StableElement.from_function(lambda m: 1, order, depth, "id")


def pi_n(n: int, order: int, depth: int) -> StableElement:
    """Adams eigenprojector: level l is p_{n+l}."""
    return StableElement.from_function(lambda m: int(m == n), order, depth, f"pi_{n}")


def chi_interval(n: int, order: int, depth: int) -> StableElement:
    """Characteristic function of [-n, n], i.e. pi_{-n} + ... + pi_n."""
    return StableElement.from_function(lambda m: int(-n <= m <= n), order, depth, f"chi[-{n},{n}]")


def psi_stable(k: int, order: int, depth: int) -> StableElement:
    """Stable Psi^k: window m -> k^m, level l is k^{-l} (1+U)^k."""
    if k == 0:
        raise ValueError("stable Psi^k needs k != 0")
    return StableElement.from_function(lambda m: Fraction(k) ** m, order, depth, f"Psi^{k}")


def phi(n: int, k: int, order: int, depth: int) -> StableElement:
    """phi_{n,k}: window m -> 1/(k^m - k^n) for m != n and 0 at n."""
    if k in (0, 1, -1):
        raise ValueError("phi_{n,k} needs |k| >= 2")
    kk = Fraction(k)

    def fn(m: int):
        return 0 if m == n else 1 / (kk**m - kk**n)

    return StableElement.from_function(fn, order, depth, f"phi_{n},{k}")


def stable_compose(x: StableElement, y: StableElement) -> StableElement:
    x._check(y)
    return StableElement({m: normalize(x[m] * y[m]) for m in x.values}, x.order, x.depth)


def levelwise_star(x: StableElement, y: StableElement) -> list:
    """star-composition of the level series, for comparison with ``stable_compose``."""
    return [
        star_compose(AdditiveOpSeries(a), AdditiveOpSeries(b)).series for a, b in zip(x.levels(), y.levels())
    ]
