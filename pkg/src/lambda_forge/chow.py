"""Chow rings of products of projective spaces, characteristic classes and Riemann-Roch checks.

CH*(P^{n_1} x ... x P^{n_m}) = Z[h_1..h_m]/(h_i^{n_i+1}); a line class [O(a)]
has c_1 = sum a_i h_i.  Pushforwards forget trailing factors: on K_0 through
Hilbert polynomials, on Chow by extracting the top coefficient of the fibre.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .lambda_k import BaseSpace, SplitElement, normal_form
from .scalars import Q, ScalarDomain, normalize, scalar_to_str
from .series import TruncSeries, binom, series_exp, series_invert
from .symmetric import chi_poly
from .truncpoly import NilPoly


@dataclass(frozen=True, eq=False)
class ChowClass:
    space: BaseSpace
    poly: NilPoly

    def __post_init__(self):
        if self.poly.dims != self.space.dims:
            raise ValueError("class does not live on this space")

    @classmethod
    def const(cls, space: BaseSpace, c) -> "ChowClass":
        return cls(space, NilPoly.const(space.dims, c))

    @classmethod
    def h(cls, space: BaseSpace, i: int = 0) -> "ChowClass":
        return cls(space, NilPoly.gen(space.dims, i))

    def __add__(self, other):
        if isinstance(other, ChowClass):
            return ChowClass(self.space, self.poly + other.poly)
        return ChowClass(self.space, self.poly + other)

    __radd__ = __add__

    def __neg__(self):
        return ChowClass(self.space, -self.poly)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ChowClass):
            return ChowClass(self.space, self.poly * other.poly)
        return ChowClass(self.space, self.poly.scale(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ChowClass":
        return ChowClass(self.space, self.poly**k)

    def __eq__(self, other):
        if not isinstance(other, ChowClass):
            return NotImplemented
        return self.space == other.space and self.poly == other.poly

    def __hash__(self):
        return hash((self.space, self.poly))

    def degree_part(self, j: int) -> "ChowClass":
        return ChowClass(self.space, self.poly.degree_part(j))

    def chern(self, j: int) -> "ChowClass":
        return self.degree_part(j)

    def inverse(self, domain: ScalarDomain = Q) -> "ChowClass":
        return ChowClass(self.space, self.poly.inverse(domain))

    def pullback(self, *extra_dims: int) -> "ChowClass":
        return ChowClass(self.space.times(*extra_dims), self.poly.pullback(extra_dims))

    def pretty(self) -> str:
        return self.poly.pretty("h")

    def __repr__(self):
        return f"ChowClass<{self.space}>({self.pretty()})"

    def to_json(self) -> dict:
        return {"dims": list(self.space.dims), "poly": self.poly.to_json()["terms"]}


# relative maps -----------------------------------------------------------------------


@dataclass(frozen=True)
class RelativeMap:
    """Projection forgetting the trailing ``fibre`` factors of ``source``."""

    kind: str  # ProjectionToPoint | ForgetLastFactor
    source: BaseSpace
    fibre: int = 1

    def __post_init__(self):
        if self.kind not in ("ProjectionToPoint", "ForgetLastFactor"):
            raise ValueError(f"unknown map kind {self.kind!r}")
        if self.kind == "ProjectionToPoint":
            object.__setattr__(self, "fibre", self.source.factors)
        if not 1 <= self.fibre <= self.source.factors:
            raise ValueError("a relative map needs at least one fibre factor")

    @classmethod
    def to_point(cls, source: BaseSpace) -> "RelativeMap":
        return cls("ProjectionToPoint", source)

    @classmethod
    def forget_last(cls, source: BaseSpace, count: int = 1) -> "RelativeMap":
        return cls("ForgetLastFactor", source, count)

    @property
    def target(self) -> BaseSpace:
        return BaseSpace(self.source.dims[: self.source.factors - self.fibre])

    @property
    def fibre_dims(self) -> tuple:
        return self.source.dims[self.source.factors - self.fibre:]

    @property
    def relative_dim(self) -> int:
        return sum(self.fibre_dims)

    def __str__(self):
        return f"{self.source} -> {self.target}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "source": list(self.source.dims), "target": list(self.target.dims),
                "relativeDim": self.relative_dim}


# characteristic classes -----------------------------------------------------------------


def first_chern(space: BaseSpace, a) -> NilPoly:
    return NilPoly(space.dims, {tuple(int(i == j) for j in range(space.factors)): ai for i, ai in enumerate(a)})


def _int_multiplicity(c, what: str) -> int:
    c = normalize(c)
    if isinstance(c, Fraction):
        raise ValueError(f"{what} needs integer multiplicities, got {c}")
    return c


def total_chern(x: SplitElement) -> ChowClass:
    dims = x.space.dims
    out = NilPoly.const(dims, 1)
    for a, c in x.terms.items():
        line = first_chern(x.space, a) + 1
        out = out * line ** _int_multiplicity(c, "total_chern")
    return ChowClass(x.space, out)


def chern_classes(x: SplitElement) -> list:
    c = total_chern(x)
    return [c.chern(j) for j in range(x.space.dim + 1)]


def chi_n_class(n: int, x: SplitElement) -> ChowClass:
    if n < 0:
        raise ValueError("chi_n needs n >= 0")
    if n == 0:
        return ChowClass.const(x.space, x.rank)
    cs = chern_classes(x)
    P = chi_poly(n)
    dims = x.space.dims
    vals = {f"c{j}": (cs[j].poly if j < len(cs) else NilPoly.zero(dims)) for j in range(1, n + 1)}
    value = P.evaluate({name: vals[name] for name in P.names}, one=NilPoly.const(dims, 1), zero=NilPoly.zero(dims))
    return ChowClass(x.space, value)


def _series_on_lines(x: SplitElement, f: TruncSeries) -> NilPoly:
    """sum_L c_L f(c_1 L)."""
    dims = x.space.dims
    out = NilPoly.zero(dims)
    for a, c in x.terms.items():
        out = out + first_chern(x.space, a).apply_series(f).scale(c)
    return out


def _exp_series(N: int) -> TruncSeries:
    return series_exp(TruncSeries.monomial(1, N, Q))


def todd_series(N: int) -> TruncSeries:
    """t / (1 - e^{-t})."""
    e_neg = series_exp(TruncSeries.monomial(1, N + 1, Q, c=-1))
    denom = TruncSeries(Q, tuple(-c for c in e_neg.coeffs))  # 1 - e^{-t} = t - t^2/2 + ...
    q = TruncSeries(Q, denom.coeffs[1:])  # (1 - e^{-t}) / t
    return series_invert(q)


def chern_character(x: SplitElement) -> ChowClass:
    return ChowClass(x.space, _series_on_lines(x, _exp_series(max(x.space.dim, 1))))


def todd_class(x: SplitElement) -> ChowClass:
    dims = x.space.dims
    td = todd_series(max(x.space.dim, 1))
    out = NilPoly.const(dims, 1)
    for a, c in x.terms.items():
        out = out * first_chern(x.space, a).apply_series(td) ** _int_multiplicity(c, "todd_class")
    return ChowClass(x.space, out)


def tangent_class(f: RelativeMap) -> SplitElement:
    """Euler sequence on each fibre factor: (d+1)[O(e_i)] - 1."""
    return _euler(f, 1)


def cotangent_class(f: RelativeMap) -> SplitElement:
    return _euler(f, -1)


def _euler(f: RelativeMap, sign: int) -> SplitElement:
    space = f.source
    m = space.factors
    out = SplitElement.zero(space)
    for i in range(m - f.fibre, m):
        a = [0] * m
        a[i] = sign
        out = out + SplitElement(space, {tuple(a): space.dims[i] + 1, (0,) * m: -1})
    return out


# pushforwards ---------------------------------------------------------------------------


def hilbert_polynomial(d: int, m: int) -> int:
    """chi(P^d, O(m)) = (m+1)...(m+d)/d!, valid for every integer m."""
    return binom(m + d, d)


def k_pushforward(f: RelativeMap, x: SplitElement) -> SplitElement:
    if x.space != f.source:
        raise ValueError(f"element lives on {x.space}, map starts at {f.source}")
    keep = f.target.factors
    out: dict = {}
    for a, c in x.terms.items():
        w = 1
        for d, m in zip(f.fibre_dims, a[keep:]):
            w *= hilbert_polynomial(d, m)
        if w:
            out[a[:keep]] = out.get(a[:keep], 0) + c * w
    return SplitElement(f.target, out)


def chow_pushforward(f: RelativeMap, y: ChowClass) -> ChowClass:
    if y.space != f.source:
        raise ValueError(f"class lives on {y.space}, map starts at {f.source}")
    return ChowClass(f.target, y.poly.extract_last(f.fibre, f.fibre_dims))


# Bott classes ---------------------------------------------------------------------------


def theta_line(space: BaseSpace, a, k: int) -> NilPoly:
    """theta^k(L) = 1 + L + ... + L^{k-1} in normal form."""
    terms: dict = {}
    for j in range(k):
        key = tuple(j * ai for ai in a)
        terms[key] = terms.get(key, 0) + 1
    return normal_form(SplitElement(space, terms))


def theta_k(x: SplitElement, k: int) -> SplitElement:
    """theta^k(P - N) = theta^k(P) theta^k(N)^{-1}, computed over Z[1/k]."""
    if k < 2:
        raise ValueError("theta^k needs k >= 2")
    dom = ScalarDomain.invert_integer(k)
    dims = x.space.dims
    pos = NilPoly.const(dims, 1)
    neg = NilPoly.const(dims, 1)
    for a, c in x.positive_part().terms.items():
        pos = pos * theta_line(x.space, a, k) ** _int_multiplicity(c, "theta^k")
    for a, c in x.negative_part().terms.items():
        neg = neg * theta_line(x.space, a, k) ** _int_multiplicity(c, "theta^k")
    value = pos * neg.inverse(dom)
    for d in value.denominators():
        if not dom._allowed_denominator(d):
            raise ArithmeticError(f"theta^{k} left Z[1/{k}] (denominator {d})")
    return SplitElement.from_normal_form(x.space, value)


# verifiers ---------------------------------------------------------------------------------


@dataclass
class RRReport:
    claim: str
    lhs: object
    rhs: object
    equal: bool
    trace: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"claim": self.claim, "lhs": _jsonable(self.lhs), "rhs": _jsonable(self.rhs), "equal": self.equal,
                "trace": {k: _jsonable(v) for k, v in self.trace.items()}}


def _jsonable(v):
    if isinstance(v, (SplitElement,)):
        return v.normal_form().pretty("u")
    if isinstance(v, ChowClass):
        return v.pretty()
    if isinstance(v, NilPoly):
        return v.pretty("h")
    if isinstance(v, (int, Fraction)):
        return scalar_to_str(v)
    return v


def verify_arr(f: RelativeMap, k: int, x: SplitElement) -> RRReport:
    """Psi^k(f_* x) = f_*(Psi^k x . theta^k(Omega_f)^{-1})."""
    if k < 2:
        raise ValueError("Adams-Riemann-Roch needs k >= 2")
    omega = cotangent_class(f)
    theta_inv = theta_k(-omega, k)
    lhs = k_pushforward(f, x).adams(k)
    inner = x.adams(k) * theta_inv
    rhs = k_pushforward(f, inner)
    return RRReport(f"ARR k={k} on {f}", lhs, rhs, lhs == rhs,
                    {"f_*x": k_pushforward(f, x), "Psi^k x": x.adams(k), "theta^k(Omega_f)^-1": theta_inv,
                     "integrand": inner})


def verify_grr(f: RelativeMap, x: SplitElement) -> RRReport:
    """ch(f_* x) = f_*(ch(x) td(T_f))."""
    td = todd_class(tangent_class(f))
    lhs = chern_character(k_pushforward(f, x))
    integrand = chern_character(x) * td
    rhs = chow_pushforward(f, integrand)
    return RRReport(f"GRR on {f}", lhs, rhs, lhs == rhs,
                    {"f_*x": k_pushforward(f, x), "ch(x)": chern_character(x), "td(T_f)": td})


def verify_hrr(d: int, m: int) -> RRReport:
    """C(m+d, d) = [h^d] e^{mh} (h / (1 - e^{-h}))^{d+1}."""
    space = BaseSpace((d,))
    h = NilPoly.gen(space.dims, 0)
    e = h.scale(m).apply_series(_exp_series(max(d, 1)))
    td = h.apply_series(todd_series(max(d, 1))) ** (d + 1)
    rhs = normalize((e * td).coefficient((d,)))
    lhs = hilbert_polynomial(d, m)
    return RRReport(f"HRR on P^{d}, O({m})", lhs, rhs, lhs == rhs, {"td(P^d)": td, "ch(O(m))": e})


def verify_omega_chi(n: int, X: BaseSpace) -> list:
    """chi_n(u [x] [L]) on X x P^1 equals [infinity] [x] n chi_{n-1}([L]), one report per generator L."""
    if n < 1:
        raise ValueError("n >= 1")
    reports = []
    XP1 = X.times(1)
    u = SplitElement.u(BaseSpace((1,)))
    t = NilPoly.gen(XP1.dims, XP1.factors - 1)  # class of a point of P^1
    for i in range(X.factors):
        a = [0] * X.factors
        a[i] = 1
        L = SplitElement.line(X, *a)
        lhs = chi_n_class(n, L.boxtimes(u))
        lower = chi_n_class(n - 1, L) if n > 1 else ChowClass.const(X, L.rank)
        rhs = ChowClass(XP1, (lower.poly.pullback((1,)) * t).scale(n))
        reports.append(RRReport(f"Omega(chi_{n}) = {n} chi_{n - 1} on {X}, L=O({','.join(map(str, a))})",
                                lhs, rhs, lhs == rhs, {"chi_{n-1}(L)": lower}))
    return reports


def serre_duality_check(d: int, m: int) -> bool:
    """chi(O(m)) = (-1)^d chi(O(-m-d-1)) on P^d."""
    return hilbert_polynomial(d, m) == (-1) ** d * hilbert_polynomial(d, -m - d - 1)

