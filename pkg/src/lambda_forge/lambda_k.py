"""K_0 of P^{n_1} x ... x P^{n_m} as a special lambda-ring with duality.

Elements are integer combinations of line classes [O(a_1, ..., a_m)].  The
lambda, gamma and Adams operations are computed on that presentation (the
group ring of Z^m is itself a special lambda-ring and maps onto K_0), and
equality is decided in the normal form Z[u_1..u_m]/(u_i^{n_i+1}) with
[O(a)] -> prod (1+u_i)^{a_i}.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .scalars import normalize, scalar_from_str, scalar_to_str
from .series import binom
from .symmetric import universal_plethysm_poly, universal_product_poly
from .truncpoly import NilPoly, monomials


@dataclass(frozen=True)
class BaseSpace:
    dims: tuple = ()

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if any(n < 0 for n in dims):
            raise ValueError("projective space dimensions must be >= 0")
        object.__setattr__(self, "dims", dims)

    @property
    def factors(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def times(self, *extra: int) -> "BaseSpace":
        return BaseSpace(self.dims + tuple(extra))

    def __str__(self):
        if not self.dims:
            return "pt"
        return " x ".join(f"P^{n}" for n in self.dims)


POINT = BaseSpace(())


def _padd(a: Mapping, b: Mapping, sign: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
    return {k: v for k, v in out.items() if v}


def _pmul(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, 0) + va * vb
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True, eq=False)
class SplitElement:
    space: BaseSpace
    terms: Mapping = field(default_factory=dict)  # exponent vector a -> coefficient of [O(a)]

    def __post_init__(self):
        m = self.space.factors
        clean = {}
        for a, c in self.terms.items():
            a = tuple(int(x) for x in a)
            if len(a) != m:
                raise ValueError(f"line class {a} does not live on {self.space}")
            c = normalize(c)
            if c:
                clean[a] = clean.get(a, 0) + c
        object.__setattr__(self, "terms", {a: c for a, c in clean.items() if c})

    # constructors ---------------------------------------------------------
    @classmethod
    def line(cls, space: BaseSpace, *a: int) -> "SplitElement":
        if len(a) == 1 and isinstance(a[0], (tuple, list)):
            a = tuple(a[0])
        return cls(space, {tuple(a): 1})

    @classmethod
    def const(cls, space: BaseSpace, c) -> "SplitElement":
        return cls(space, {(0,) * space.factors: c})

    @classmethod
    def zero(cls, space: BaseSpace) -> "SplitElement":
        return cls(space, {})

    @classmethod
    def u(cls, space: BaseSpace, i: int = 0) -> "SplitElement":
        """u_i = [O(e_i)] - 1."""
        a = [0] * space.factors
        a[i] = 1
        return cls(space, {tuple(a): 1, (0,) * space.factors: -1})

    @classmethod
    def from_normal_form(cls, space: BaseSpace, p: NilPoly) -> "SplitElement":
        """A line-class presentation of an element of Z[u]/(u^{n+1}) (u_i^e = ([O(e_i)]-1)^e)."""
        if p.dims != space.dims:
            raise ValueError("normal form lives on a different space")
        out: dict = {}
        for e, c in p.terms.items():
            for b in itertools.product(*(range(k + 1) for k in e)):
                w = 1
                for ek, bk in zip(e, b):
                    w *= math.comb(ek, bk) * (-1) ** (ek - bk)
                out[b] = out.get(b, 0) + c * w
        return cls(space, out)

    # ring structure -------------------------------------------------------
    def _same(self, other: "SplitElement"):
        if self.space != other.space:
            raise ValueError(f"elements live on different spaces: {self.space} vs {other.space}")

    def _coerce(self, other) -> "SplitElement":
        if isinstance(other, SplitElement):
            self._same(other)
            return other
        return SplitElement.const(self.space, other)

    def __add__(self, other):
        other = self._coerce(other)
        return SplitElement(self.space, _padd(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self):
        return SplitElement(self.space, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        return SplitElement(self.space, _padd(self.terms, other.terms, -1))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "SplitElement":
        return SplitElement(self.space, {a: c * v for a, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SplitElement):
            return self.scale(other)
        self._same(other)
        return SplitElement(self.space, _pmul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SplitElement":
        if k < 0:
            raise ValueError("negative powers are not defined in K_0")
        out = SplitElement.const(self.space, 1)
        for _ in range(k):
            out = out * self
        return out

    # invariants ------------------------------------------------------------
    @property
    def rank(self):
        return normalize(sum(self.terms.values(), 0))

    augmentation = rank

    def is_integral(self) -> bool:
        return all(not isinstance(c, Fraction) for c in self.terms.values())

    def normal_form(self) -> NilPoly:
        return normal_form(self)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SplitElement.const(self.space, other)
        if not isinstance(other, SplitElement):
            return NotImplemented
        return self.space == other.space and self.normal_form() == other.normal_form()

    def __hash__(self):
        return hash((self.space, self.normal_form()))

    def reduced(self) -> "SplitElement":
        """The canonical presentation obtained from the normal form."""
        return SplitElement.from_normal_form(self.space, self.normal_form())

    def positive_part(self) -> "SplitElement":
        return SplitElement(self.space, {a: c for a, c in self.terms.items() if c > 0})

    def negative_part(self) -> "SplitElement":
        """N with self = positive_part - N."""
        return SplitElement(self.space, {a: -c for a, c in self.terms.items() if c < 0})

    def pullback(self, *extra_dims: int) -> "SplitElement":
        k = len(extra_dims)
        return SplitElement(self.space.times(*extra_dims), {a + (0,) * k: c for a, c in self.terms.items()})

    def boxtimes(self, other: "SplitElement") -> "SplitElement":
        """External product onto self.space x other.space."""
        space = BaseSpace(self.space.dims + other.space.dims)
        return SplitElement(space, {a + b: c * d for a, c in self.terms.items() for b, d in other.terms.items()})

    def __repr__(self):
        parts = []
        for a, c in sorted(self.terms.items()):
            lab = "O(" + ",".join(str(x) for x in a) + ")"
            parts.append(f"{scalar_to_str(c)}[{lab}]")
        return f"SplitElement<{self.space}>(" + (" + ".join(parts) if parts else "0") + ")"

    # operations -------------------------------------------------------------
    def adams(self, k: int) -> "SplitElement":
        return adams_op(k, self)

    def dual(self) -> "SplitElement":
        return dual(self)

    def to_json(self) -> dict:
        return {
            "dims": list(self.space.dims),
            "terms": [{"a": list(a), "c": scalar_to_str(c)} for a, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, data) -> "SplitElement":
        space = BaseSpace(tuple(data["dims"]))
        terms: dict = {}
        for t in data["terms"]:
            c = t["c"]
            c = scalar_from_str(c) if isinstance(c, str) else c
            terms[tuple(t["a"])] = terms.get(tuple(t["a"]), 0) + c
        return cls(space, terms)


def _one_plus_u_power(n: int, a: int) -> list:
    """Coefficients of (1+u)^a mod u^{n+1}."""
    return [binom(a, j) for j in range(n + 1)]


def normal_form(x: SplitElement) -> NilPoly:
    dims = x.space.dims
    out: dict = {}
    for a, c in x.terms.items():
        rows = [_one_plus_u_power(n, ai) for n, ai in zip(dims, a)]
        for e in monomials(dims):
            w = c
            for r, ei in zip(rows, e):
                w *= r[ei]
                if not w:
                    break
            if w:
                out[e] = out.get(e, 0) + w
    return NilPoly(dims, out)


# lambda / gamma / Adams --------------------------------------------------------


def lambda_series(x: SplitElement, n: int) -> list:
    """[lambda^0 x, ..., lambda^n x] from lambda_t(sum c_a L_a) = prod (1 + L_a t)^{c_a}."""
    if not x.is_integral():
        raise ValueError("lambda operations need an integral presentation")
    m = x.space.factors
    zero_a = (0,) * m
    series = [{zero_a: 1}] + [{} for _ in range(n)]
    for a, c in sorted(x.terms.items()):
        factor = [{tuple(j * ai for ai in a): binom(c, j)} if binom(c, j) else {} for j in range(n + 1)]
        new = [{} for _ in range(n + 1)]
        for i, si in enumerate(series):
            if not si:
                continue
            for j in range(n + 1 - i):
                if factor[j]:
                    new[i + j] = _padd(new[i + j], _pmul(si, factor[j]))
        series = new
    return [SplitElement(x.space, s) for s in series]


def lambda_op(n: int, x: SplitElement) -> SplitElement:
    if n < 0:
        raise ValueError("lambda^n needs n >= 0")
    return lambda_series(x, n)[n]


def gamma_series(x: SplitElement, n: int) -> list:
    """[gamma^0 x, ..., gamma^n x], gamma_t = lambda_{t/(1-t)}: gamma^n = sum_j C(n-1, j-1) lambda^j."""
    lam = lambda_series(x, n)
    out = [SplitElement.const(x.space, 1)]
    for k in range(1, n + 1):
        acc = SplitElement.zero(x.space)
        for j in range(1, k + 1):
            acc = acc + lam[j].scale(math.comb(k - 1, j - 1))
        out.append(acc)
    return out


def gamma_op(n: int, x: SplitElement) -> SplitElement:
    if n < 0:
        raise ValueError("gamma^n needs n >= 0")
    return gamma_series(x, n)[n]


def adams_op(k: int, x: SplitElement) -> SplitElement:
    """Psi^k([O(a)]) = [O(k a)]; Psi^0 x = rank(x); Psi^{-1} = dual."""
    out: dict = {}
    for a, c in x.terms.items():
        ka = tuple(k * ai for ai in a)
        out[ka] = out.get(ka, 0) + c
    return SplitElement(x.space, out)


def dual(x: SplitElement) -> SplitElement:
    return adams_op(-1, x)


def adams_from_lambda_newton(k: int, x: SplitElement) -> SplitElement:
    """Psi^k from lambda^1..lambda^k only: Psi^k = sum_{i<k} (-1)^{i-1} lambda^i Psi^{k-i} + (-1)^{k-1} k lambda^k."""
    if k < 1:
        raise ValueError("Newton route needs k >= 1")
    lam = lambda_series(x, k)
    psi = [None]
    for j in range(1, k + 1):
        acc = lam[j].scale((-1) ** (j - 1) * j)
        for i in range(1, j):
            acc = acc + (lam[i] * psi[j - i]).scale((-1) ** (i - 1))
        psi.append(acc)
    return psi[k]


# axiom checker ------------------------------------------------------------------


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    witness: dict | None = None
    informational: bool = False

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "informational": self.informational, "witness": self.witness}


@dataclass
class AxiomReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def first_failure(self) -> AxiomCheck | None:
        for c in self.checks:
            if not c.passed and not c.informational:
                return c
        return None

    def to_json(self) -> dict:
        fail = self.first_failure()
        return {
            "claim": "special lambda-ring axioms with duality",
            "equal": self.passed,
            "checks": [c.to_json() for c in self.checks],
            "firstFailure": fail.to_json() if fail else None,
        }


def _witness(label: str, lhs: NilPoly, rhs: NilPoly, **extra) -> dict:
    return {"check": label, "lhs": lhs.pretty(), "rhs": rhs.pretty(), **extra}


def verify_special_axioms(
    x: SplitElement,
    y: SplitElement,
    max_degree: int = 3,
    lambda_fn: Callable[[int, SplitElement], SplitElement] | None = None,
    adams_range: Iterable[int] = range(-3, 4),
    plethysm_weight: int | None = None,
) -> AxiomReport:
    """Check the special lambda-ring axioms on x, y; failures are reported, never raised.

    ``lambda_fn`` replaces lambda^n (used to confirm the checker notices a broken operation).
    """
    x._same(y)
    lam = lambda_fn or lambda_op
    D = max_degree
    plethysm_weight = min(2 * D, 8) if plethysm_weight is None else plethysm_weight
    checks: list = []
    nf = normal_form

    def record(name, pairs, informational=False):
        for key, lhs, rhs in pairs:
            a, b = nf(lhs), nf(rhs)
            if a != b:
                checks.append(AxiomCheck(name, False, _witness(name, a, b, case=key), informational))
                return
        checks.append(AxiomCheck(name, True, None, informational))

    lx = [lam(i, x) for i in range(D + 1)]
    ly = [lam(i, y) for i in range(D + 1)]
    one = SplitElement.const(x.space, 1)

    record("lambda^0 = 1, lambda^1 = id", [("n=0", lx[0], one), ("n=1", lx[1], x)])

    sums = []
    for n in range(D + 1):
        rhs = SplitElement.zero(x.space)
        for i in range(n + 1):
            rhs = rhs + lx[i] * ly[n - i]
        sums.append((f"n={n}", lam(n, x + y), rhs))
    record("lambda_t(x+y) = lambda_t(x) lambda_t(y)", sums)

    xn, yn = [nf(e) for e in lx], [nf(e) for e in ly]
    prods = []
    for n in range(1, D + 1):
        P = universal_product_poly(n)
        vals = {f"e{i}": xn[i] for i in range(1, n + 1)}
        vals.update({f"f{i}": yn[i] for i in range(1, n + 1)})
        rhs = P.evaluate(vals, one=NilPoly.const(x.space.dims, 1), zero=NilPoly.zero(x.space.dims))
        prods.append((f"n={n}", nf(lam(n, x * y)), rhs))
    _record_nf(checks, "lambda^n(xy) = P_n", prods)

    pleth = []
    need = max([m * n for m in range(2, D + 1) for n in range(2, D + 1) if m * n <= plethysm_weight] or [1])
    lxx = [nf(lam(i, x)) for i in range(need + 1)]
    for m in range(2, D + 1):
        for n in range(2, D + 1):
            if m * n > plethysm_weight:
                continue
            P = universal_plethysm_poly(m, n)
            rhs = P.evaluate(
                {f"e{i}": lxx[i] for i in range(1, m * n + 1)},
                one=NilPoly.const(x.space.dims, 1),
                zero=NilPoly.zero(x.space.dims),
            )
            pleth.append((f"m={m},n={n}", nf(lam(m, lam(n, x))), rhs))
    _record_nf(checks, "lambda^m(lambda^n x) = P_{m,n}", pleth)

    ks = list(adams_range)
    record(
        "Psi^k Psi^k' = Psi^{kk'}",
        [(f"k={k},k'={j}", adams_op(k, adams_op(j, x)), adams_op(k * j, x)) for k in ks for j in ks],
    )
    record(
        "Psi^k ring homomorphism",
        [(f"k={k},mul", adams_op(k, x * y), adams_op(k, x) * adams_op(k, y)) for k in ks]
        + [(f"k={k},add", adams_op(k, x + y), adams_op(k, x) + adams_op(k, y)) for k in ks],
    )
    record(
        "Psi^k from lambda by Newton",
        [(f"k={k}", _newton_with(lam, k, x), adams_op(k, x)) for k in range(1, D + 1)],
    )
    record(
        "duality: involutive ring map, dual Psi^k = Psi^{-k}",
        [("dual dual", dual(dual(x)), x), ("dual(xy)", dual(x * y), dual(x) * dual(y)),
         ("dual(x+y)", dual(x + y), dual(x) + dual(y))]
        + [(f"k={k}", dual(adams_op(k, x)), adams_op(-k, x)) for k in ks],
    )
    record("x^2 = Psi^2 x + 2 lambda^2 x", [("x", x * x, adams_op(2, x) + lam(2, x).scale(2))])
    record(
        "dual commutes with lambda^n",
        [(f"n={n}", dual(lam(n, x)), lam(n, dual(x))) for n in range(D + 1)],
        informational=True,
    )
    return AxiomReport(checks)


def _record_nf(checks, name, pairs):
    for key, a, b in pairs:
        if a != b:
            checks.append(AxiomCheck(name, False, _witness(name, a, b, case=key)))
            return
    checks.append(AxiomCheck(name, True))


def _newton_with(lam, k, x):
    ls = [lam(i, x) for i in range(k + 1)]
    psi = [None]
    for j in range(1, k + 1):
        acc = ls[j].scale((-1) ** (j - 1) * j)
        for i in range(1, j):
            acc = acc + (ls[i] * psi[j - i]).scale((-1) ** (i - 1))
        psi.append(acc)
    return psi[k]


def random_split_element(rng, space: BaseSpace, max_terms: int = 3, coeff_range=(-2, 2), a_range=(-2, 2),
                         allow_virtual: bool = True) -> SplitElement:
    """A random element with a small line-class presentation."""
    terms: dict = {}
    for _ in range(rng.randint(1, max_terms)):
        a = tuple(rng.randint(*a_range) for _ in space.dims)
        lo = coeff_range[0] if allow_virtual else 1
        c = rng.randint(lo, coeff_range[1])
        if c == 0:
            c = 1
        terms[a] = terms.get(a, 0) + c
    return SplitElement(space, terms)
