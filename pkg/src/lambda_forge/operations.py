"""Operation rings on K_0: additive operations as (A[[U]], star) and the gamma-tilde series ring.

An additive operation is the series f with tau([L]) = f([L] - 1) on line
classes.  Composition is computed in the binomial basis (1+U)^j, where
Psi^j star Psi^k = Psi^{jk}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .lambda_k import SplitElement, gamma_series, normal_form
from .scalars import Q, Z, ScalarDomain, normalize, scalar_to_str
from .series import TruncSeries, from_binomial_basis, to_binomial_basis
from .symmetric import WeightedPoly, additive_symmetrization, multiplicative_symmetrization
from .truncpoly import NilPoly


@dataclass(frozen=True)
class AdditiveOpSeries:
    series: TruncSeries

    def __post_init__(self):
        if self.series.domain.kind not in ("Z", "Q"):
            raise ValueError("additive operations are modelled over Z or Q coefficients")

    @property
    def order(self) -> int:
        return self.series.order

    @property
    def domain(self) -> ScalarDomain:
        return self.series.domain

    @classmethod
    def psi(cls, k: int, order: int, domain: ScalarDomain = Z) -> "AdditiveOpSeries":
        return cls(TruncSeries.one_plus_u_power(k, order, domain))

    @classmethod
    def from_coeffs(cls, coeffs, order: int | None = None, domain: ScalarDomain = Z) -> "AdditiveOpSeries":
        return cls(TruncSeries.from_coeffs(coeffs, order, domain))

    def __add__(self, other: "AdditiveOpSeries") -> "AdditiveOpSeries":
        return AdditiveOpSeries(self.series + other.series)

    def __sub__(self, other: "AdditiveOpSeries") -> "AdditiveOpSeries":
        return AdditiveOpSeries(self.series - other.series)

    def scale(self, c) -> "AdditiveOpSeries":
        return AdditiveOpSeries(self.series.scale(c))

    def truncate(self, order: int) -> "AdditiveOpSeries":
        return AdditiveOpSeries(self.series.truncate(order))

    def __eq__(self, other):
        return isinstance(other, AdditiveOpSeries) and self.series == other.series

    def __hash__(self):
        return hash(self.series)

    def __repr__(self):
        return f"AdditiveOpSeries({self.series!r})"


def star_compose(f: AdditiveOpSeries, g: AdditiveOpSeries) -> AdditiveOpSeries:
    """f star g: the operation 'apply g, then f'."""
    if f.order != g.order:
        raise ValueError(f"star needs equal truncation orders, got {f.order} and {g.order}")
    domain = Q if Q in (f.domain, g.domain) else Z
    n = f.order
    alpha = to_binomial_basis(f.series)
    beta = to_binomial_basis(g.series)
    collected: dict = {}
    for j, a in enumerate(alpha):
        if not a:
            continue
        for k, b in enumerate(beta):
            if b:
                collected[j * k] = collected.get(j * k, 0) + a * b
    return AdditiveOpSeries(from_binomial_basis(collected, n, domain))


# gamma-tilde series ---------------------------------------------------------------


def gamma_variables(W: int) -> WeightedPoly:
    return WeightedPoly(tuple(f"g{i}" for i in range(1, W + 1)), tuple(range(1, W + 1)), {}, W)


def _e_to_g(p: WeightedPoly) -> WeightedPoly:
    names = tuple("g" + n[1:] for n in p.names)
    return WeightedPoly(names, p.weights, p.terms, p.weight_bound)


@dataclass(frozen=True, eq=False)
class GammaSeries:
    """An element of prod_{r in Z} A[[g1, g2, ...]], truncated at weight W.

    The rank-r component is ``rank_table[r]`` if present, otherwise
    ``rank_unit**r * poly``.
    """

    poly: WeightedPoly
    rank_unit: object = 1
    rank_table: Mapping = field(default_factory=dict)

    @property
    def weight_bound(self) -> int:
        return self.poly.weight_bound

    def component(self, rank: int) -> WeightedPoly:
        if rank in self.rank_table:
            return self.rank_table[rank]
        u = self.rank_unit
        factor = normalize(Fraction(u) ** rank) if rank < 0 else u**rank
        return self.poly.scale(factor) if factor != 1 else self.poly

    def __eq__(self, other):
        if not isinstance(other, GammaSeries):
            return NotImplemented
        return (
            self.poly == other.poly
            and self.rank_unit == other.rank_unit
            and dict(self.rank_table) == dict(other.rank_table)
        )

    def __repr__(self):
        return f"GammaSeries({self.poly.pretty()}, rank_unit={self.rank_unit})"

    def to_json(self) -> dict:
        return {
            "poly": self.poly.to_json(),
            "rankUnit": scalar_to_str(self.rank_unit),
            "rankTable": [{"rank": r, "poly": p.to_json()} for r, p in sorted(self.rank_table.items())],
        }

    @classmethod
    def from_json(cls, data) -> "GammaSeries":
        from .scalars import scalar_from_str

        return cls(
            WeightedPoly.from_json(data["poly"]),
            scalar_from_str(data.get("rankUnit", "1")),
            {t["rank"]: WeightedPoly.from_json(t["poly"]) for t in data.get("rankTable", [])},
        )


def additive_to_gamma(f: AdditiveOpSeries, W: int) -> GammaSeries:
    if f.series[0] != 0:
        raise ValueError("only reduced operations (f(0) = 0) have a gamma-tilde expansion here")
    return GammaSeries(_e_to_g(additive_symmetrization(f.series, W)))


def gamma_to_additive(G: GammaSeries, N: int) -> AdditiveOpSeries:
    """Value on line classes: g1 -> U, g_j -> 0 for j >= 2 (gamma^j([L]-1) = 0)."""
    P = G.component(1)
    domain = Z if all(not isinstance(c, Fraction) for c in P.terms.values()) else Q
    U = TruncSeries.monomial(1, N, domain)
    zero = TruncSeries.zero(N, domain)
    values = {n: (U if n == "g1" else zero) for n in P.names}
    out = P.evaluate(values, one=TruncSeries.constant(1, N, domain), zero=zero)
    return AdditiveOpSeries(out)


def multiplicative_class(f: TruncSeries, W: int) -> GammaSeries:
    """The class tau with tau(x + y) = tau(x) tau(y) and tau([L]) = f([L] - 1)."""
    d = f.domain
    if not d.is_unit(f[0]):
        raise ValueError(f"constant term {f[0]} is not a unit in {d}")
    poly = _e_to_g(multiplicative_symmetrization(f, W))
    return GammaSeries(poly, rank_unit=f[0])


def apply_operation(op, x: SplitElement) -> SplitElement:
    if isinstance(op, AdditiveOpSeries):
        return _apply_additive(op, x)
    if isinstance(op, GammaSeries):
        return _apply_gamma(op, x)
    raise TypeError(f"unsupported operation {type(op).__name__}")


def _apply_additive(f: AdditiveOpSeries, x: SplitElement) -> SplitElement:
    if f.order < x.space.dim:
        raise ValueError(f"truncation {f.order} is below the nilpotence bound {x.space.dim} of {x.space}")
    alpha = to_binomial_basis(f.series)
    out: dict = {}
    for a, c in x.terms.items():
        for j, aj in enumerate(alpha):
            if aj:
                key = tuple(j * ai for ai in a)
                out[key] = out.get(key, 0) + c * aj
    return SplitElement(x.space, out)


def _apply_gamma(G: GammaSeries, x: SplitElement) -> SplitElement:
    W = G.weight_bound
    if W is None or W < x.space.dim:
        raise ValueError(f"weight bound {W} is below the nilpotence bound {x.space.dim} of {x.space}")
    r = x.rank
    if isinstance(r, Fraction):
        raise ValueError("gamma-tilde operations need an integral rank")
    y = x - r
    gs = gamma_series(y, W)
    P = G.component(r)
    dims = x.space.dims
    vals = {f"g{i}": normal_form(gs[i]) for i in range(1, W + 1)}
    value = P.evaluate({n: vals[n] for n in P.names}, one=NilPoly.const(dims, 1), zero=NilPoly.zero(dims))
    return SplitElement.from_normal_form(x.space, value)


# ring endomorphisms: f(U) f(V) = f(U + V + UV) ----------------------------------------


@dataclass
class EndoClassification:
    exponent: int | None
    witness: dict | None = None

    @property
    def is_psi(self) -> bool:
        return self.exponent is not None

    def to_json(self) -> dict:
        if self.is_psi:
            return {"kind": "Psi", "exponent": self.exponent}
        return {"kind": "NotOfPsiForm", "witness": self.witness}


def classify_multiplicative_endo(f: TruncSeries, N: int | None = None) -> EndoClassification:
    """Decide whether f is (1+U)^k by testing f(U)f(V) = f(U+V+UV) up to total degree N."""
    N = f.order if N is None else min(N, f.order)
    if f[0] != 1:
        return EndoClassification(None, {"reason": "f(0) != 1", "f0": scalar_to_str(f[0])})
    alpha = to_binomial_basis(f.truncate(N))
    # f(U+V+UV) = sum_l alpha_l (1+U)^l (1+V)^l
    for total in range(N + 1):
        for i in range(total + 1):
            j = total - i
            lhs = f[i] * f[j]
            rhs = sum(a * math.comb(l, i) * math.comb(l, j) for l, a in enumerate(alpha) if a)
            if lhs != rhs:
                return EndoClassification(
                    None,
                    {"monomial": f"U^{i} V^{j}", "lhs": scalar_to_str(lhs), "rhs": scalar_to_str(normalize(rhs))},
                )
    k = f[1] if N >= 1 else 0
    if isinstance(k, Fraction):
        return EndoClassification(None, {"reason": "exponent is not an integer", "exponent": scalar_to_str(k)})
    target = TruncSeries.one_plus_u_power(k, N, f.domain)
    if f.truncate(N) != target:
        diff = next(i for i in range(N + 1) if f[i] != target[i])
        return EndoClassification(
            None, {"monomial": f"U^{diff}", "lhs": scalar_to_str(f[diff]), "rhs": scalar_to_str(target[diff])}
        )
    return EndoClassification(k)
