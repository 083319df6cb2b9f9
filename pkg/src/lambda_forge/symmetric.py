"""Symmetric functions over formal roots, kept in the elementary basis.

Polynomials carry weighted variables (e_i has weight i) and are truncated at a
weight bound.  Everything is exact; power sums and the universal lambda-ring
polynomials are obtained from Newton's identities.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from .scalars import Q, Scalar, normalize, scalar_from_str, scalar_to_str
from .series import TruncSeries, series_log1p

DEBUG_VERIFY = os.environ.get("LAMBDA_FORGE_DEBUG", "") not in ("", "0")


@dataclass(frozen=True, eq=False)
class WeightedPoly:
    names: tuple
    weights: tuple
    terms: Mapping  # exponent tuple -> nonzero exact coefficient
    weight_bound: int | None = None

    def __post_init__(self):
        if len(self.names) != len(self.weights):
            raise ValueError("names and weights differ in length")
        clean = {}
        for exps, c in self.terms.items():
            exps = tuple(exps)
            if len(exps) != len(self.names):
                raise ValueError(f"exponent vector {exps} has wrong length")
            c = normalize(c)
            if c == 0:
                continue
            if self.weight_bound is not None and self._weight(exps) > self.weight_bound:
                continue
            clean[exps] = c
        object.__setattr__(self, "terms", clean)

    def _weight(self, exps) -> int:
        return sum(w * e for w, e in zip(self.weights, exps))

    # construction -------------------------------------------------------
    def _like(self, terms, bound=...) -> "WeightedPoly":
        return WeightedPoly(self.names, self.weights, terms, self.weight_bound if bound is ... else bound)

    def constant(self, c) -> "WeightedPoly":
        return self._like({(0,) * len(self.names): c})

    def var(self, name: str) -> "WeightedPoly":
        i = self.names.index(name)
        exps = [0] * len(self.names)
        exps[i] = 1
        return self._like({tuple(exps): 1})

    # queries -------------------------------------------------------------
    def weight_of(self, exps) -> int:
        return self._weight(exps)

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self, w: int) -> bool:
        return all(self._weight(e) == w for e in self.terms)

    def coefficient(self, monomial: Mapping[str, int] | Sequence[int]) -> Scalar:
        if isinstance(monomial, Mapping):
            exps = tuple(monomial.get(n, 0) for n in self.names)
        else:
            exps = tuple(monomial)
        return self.terms.get(exps, 0)

    def sorted_terms(self) -> list:
        """Graded lexicographic: by weight, then exponent vector."""
        return sorted(self.terms.items(), key=lambda kv: (self._weight(kv[0]), kv[0]))

    def variables_used(self) -> set:
        used = set()
        for exps in self.terms:
            for n, e in zip(self.names, exps):
                if e:
                    used.add(n)
        return used

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedPoly):
            return NotImplemented
        if self.names == other.names:
            return self.terms == other.terms
        if not self.variables_used() <= set(other.names):
            return False
        return self.rename_into(other.names, other.weights).terms == other.terms

    def __hash__(self):
        return hash((self.names, frozenset(self.terms.items())))

    def rename_into(self, names: Sequence[str], weights: Sequence[int]) -> "WeightedPoly":
        """Re-embed into a variable list containing all variables this poly uses."""
        pos = {n: i for i, n in enumerate(names)}
        out = {}
        for exps, c in self.terms.items():
            v = [0] * len(names)
            for n, e in zip(self.names, exps):
                if e:
                    if n not in pos:
                        raise ValueError(f"variable {n} missing from target")
                    v[pos[n]] = e
            out[tuple(v)] = out.get(tuple(v), 0) + c
        return WeightedPoly(tuple(names), tuple(weights), out, self.weight_bound)

    # arithmetic ----------------------------------------------------------
    def _check(self, other: "WeightedPoly"):
        if self.names != other.names:
            raise ValueError("variable lists differ")

    def _bound_with(self, other) -> int | None:
        bs = [b for b in (self.weight_bound, other.weight_bound) if b is not None]
        return min(bs) if bs else None

    def __add__(self, other):
        if not isinstance(other, WeightedPoly):
            other = self.constant(other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return self._like(out, self._bound_with(other))

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "WeightedPoly":
        return self._like({e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, WeightedPoly):
            return self.scale(other)
        self._check(other)
        bound = self._bound_with(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            w1 = self._weight(e1)
            for e2, c2 in other.terms.items():
                if bound is not None and w1 + self._weight(e2) > bound:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return self._like(out, bound)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "WeightedPoly":
        out = self.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def with_bound(self, w: int | None) -> "WeightedPoly":
        return self._like(self.terms, w)

    def evaluate(self, values: Mapping[str, object] | Sequence, one=1, zero=0):
        """Substitute ring elements for the variables (they need +, * and int scaling)."""
        if not isinstance(values, Mapping):
            values = dict(zip(self.names, values))
        powers: dict = {}

        def power(name, e):
            key = (name, e)
            if key not in powers:
                powers[key] = values[name] if e == 1 else power(name, e - 1) * values[name]
            return powers[key]

        acc = zero
        for exps, c in self.sorted_terms():
            mono = None
            for n, e in zip(self.names, exps):
                if e:
                    p = power(n, e)
                    mono = p if mono is None else mono * p
            term = c * one if mono is None else mono * c
            acc = acc + term
        return acc

    def __repr__(self) -> str:
        return f"WeightedPoly({self.pretty()})"

    def pretty(self) -> str:
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, exps) if e)
            cs = scalar_to_str(c)
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def to_json(self) -> dict:
        return {
            "variables": [{"name": n, "weight": w} for n, w in zip(self.names, self.weights)],
            "weightBound": self.weight_bound,
            "terms": [
                {"exponents": list(e), "coefficient": scalar_to_str(c)} for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "WeightedPoly":
        names = tuple(v["name"] for v in data["variables"])
        weights = tuple(v["weight"] for v in data["variables"])
        terms = {tuple(t["exponents"]): scalar_from_str(t["coefficient"]) for t in data["terms"]}
        return cls(names, weights, terms, data.get("weightBound"))


def variables(prefix: str, d: int, bound: int | None = None) -> WeightedPoly:
    """The zero polynomial in ``prefix``1..``prefix``d with weights 1..d."""
    return WeightedPoly(tuple(f"{prefix}{i}" for i in range(1, d + 1)), tuple(range(1, d + 1)), {}, bound)


def two_block_variables(n: int, a: str = "e", b: str = "f", bound: int | None = None) -> WeightedPoly:
    names = tuple(f"{a}{i}" for i in range(1, n + 1)) + tuple(f"{b}{i}" for i in range(1, n + 1))
    weights = tuple(range(1, n + 1)) * 2
    return WeightedPoly(names, weights, {}, bound)


def _gen(base: WeightedPoly, prefix: str, i: int) -> WeightedPoly:
    name = f"{prefix}{i}"
    return base.var(name) if name in base.names else base.constant(0)


def newton_power_sums(base: WeightedPoly, k_max: int, prefix: str = "e") -> list:
    """[p_0, p_1, ..., p_k_max] in the elementary generators named ``prefix``i of ``base``.

    p_k = e1 p_{k-1} - e2 p_{k-2} + ... + (-1)^{k-1} k e_k; p_0 is returned as
    the number-of-roots placeholder 0 and must not be used.
    """
    ps = [base.constant(0)]
    for k in range(1, k_max + 1):
        acc = _gen(base, prefix, k).scale((-1) ** (k - 1) * k)
        for i in range(1, k):
            acc = acc + (_gen(base, prefix, i) * ps[k - i]).scale((-1) ** (i - 1))
        ps.append(acc)
    return ps


def elementary_from_power_sums(ps: Sequence[WeightedPoly], n: int) -> list:
    """[e_0..e_n] from power sums p_1..p_n (``ps[k]`` = p_k), via k e_k = sum (-1)^{i-1} e_{k-i} p_i."""
    one = ps[1].constant(1)
    es = [one]
    for k in range(1, n + 1):
        acc = one.constant(0)
        for i in range(1, k + 1):
            acc = acc + (es[k - i] * ps[i]).scale((-1) ** (i - 1))
        es.append(acc.scale(Fraction(1, k)))
    return es


@lru_cache(maxsize=None)
def chi_poly(n: int) -> WeightedPoly:
    """chi_n in the Chern classes c1..cn: the power-sum polynomial."""
    if n < 1:
        raise ValueError("chi_poly needs n >= 1")
    base = variables("c", n)
    return newton_power_sums(base, n, prefix="c")[n]


def power_sums_to_elementary(k: int, d: int | None = None) -> WeightedPoly:
    """p_k written in e_1..e_min(k,d); ``d`` is the number of roots (default: stable)."""
    d = k if d is None else d
    base = variables("e", min(k, d))
    return newton_power_sums(base, k)[k]


def elementary_to_power_sums(k: int, d: int | None = None) -> WeightedPoly:
    """e_k written in p_1..p_k (zero if k exceeds the number of roots ``d``)."""
    base = variables("p", k)
    if d is not None and k > d:
        return base.constant(0)
    ps = [None] + [base.var(f"p{i}") for i in range(1, k + 1)]
    return elementary_from_power_sums(ps, k)[k]


def additive_symmetrization(f: TruncSeries, W: int) -> WeightedPoly:
    """sum_i f(u_i) in e_1..e_W, for f with f(0) = 0."""
    if f[0] != 0:
        raise ValueError("additive symmetrization needs f(0) = 0")
    base = variables("e", W, W)
    top = min(W, f.order)
    ps = newton_power_sums(base, top)
    acc = base.constant(0)
    for k in range(1, top + 1):
        if f[k]:
            acc = acc + ps[k].scale(f[k])
    return acc


def _exp_poly(x: WeightedPoly, W: int) -> WeightedPoly:
    out = x.constant(1)
    term = x.constant(1)
    for j in range(1, W + 1):
        term = (term * x).scale(Fraction(1, j))
        if term.is_zero():
            break
        out = out + term
    return out


def multiplicative_symmetrization(f: TruncSeries, W: int) -> WeightedPoly:
    """prod_i f(u_i) in e_1..e_W after normalizing f(0) to 1.

    The constant term must be a unit; its rank-th power is the caller's business.
    """
    d = f.domain
    a0 = f[0]
    if not d.is_unit(a0):
        raise ValueError(f"constant term {a0} is not a unit in {d}")
    g = [Fraction(c) / Fraction(a0) if d.kind != "Zmod" else None for c in f.coeffs]
    if None in g:
        raise ValueError("multiplicative symmetrization works over Z, Q or localized Z")
    top = min(W, f.order)
    log_g = series_log1p(TruncSeries.from_coeffs(g[: top + 1], top, Q))
    base = variables("e", W, W)
    ps = newton_power_sums(base, top)
    s = base.constant(0)
    for k in range(1, top + 1):
        if log_g[k]:
            s = s + ps[k].scale(log_g[k])
    return _exp_poly(s, W)


@lru_cache(maxsize=None)
def universal_product_poly(n: int) -> WeightedPoly:
    """P_n with lambda^n(xy) = P_n(lambda^i x; lambda^j y), in e1..en, f1..fn."""
    if n < 1:
        raise ValueError("n >= 1 required")
    base = two_block_variables(n, bound=2 * n)
    px = newton_power_sums(base, n, "e")
    py = newton_power_sums(base, n, "f")
    pz = [None] + [px[k] * py[k] for k in range(1, n + 1)]
    out = elementary_from_power_sums(pz, n)[n]
    if DEBUG_VERIFY:
        _root_check(out, lambda xs, ys: _brute_product(xs, ys, n), n, two_blocks=True)
    return out


@lru_cache(maxsize=None)
def universal_plethysm_poly(m: int, n: int, budget: int = 16) -> WeightedPoly:
    """P_{m,n} with lambda^m(lambda^n x) = P_{m,n}(lambda^1 x, ..., lambda^{mn} x)."""
    if m < 1 or n < 1:
        raise ValueError("m, n >= 1 required")
    if m * n > budget:
        raise ValueError(f"weight m*n = {m * n} exceeds budget {budget}")
    w = m * n
    base = variables("e", w, w)
    px = newton_power_sums(base, w)
    # p_k(Y) = e_n(x_1^k, x_2^k, ...), and p_j(x^k) = p_{jk}(x)
    py = [None]
    for k in range(1, m + 1):
        pxk = [None] + [px[j * k] for j in range(1, n + 1)]
        py.append(elementary_from_power_sums(pxk, n)[n])
    out = elementary_from_power_sums(py, m)[m]
    if DEBUG_VERIFY:
        _root_check(out, lambda xs: _brute_plethysm(xs, m, n), w, two_blocks=False)
    return out


# brute-force formal-root evaluation, used by the debug stability check ---------


def elementary_of(values: Sequence[int], k: int) -> int:
    """e_k of an explicit list of numbers."""
    coeffs = [1]
    for v in values:
        nxt = coeffs + [0]
        for i in range(len(coeffs), 0, -1):
            nxt[i] += nxt[i - 1] * v
        coeffs = nxt
    return coeffs[k] if k < len(coeffs) else 0


def _brute_product(xs, ys, n):
    return elementary_of([x * y for x in xs for y in ys], n)


def _brute_plethysm(xs, m, n):
    prods = []
    for c in itertools.combinations(xs, n):
        p = 1
        for v in c:
            p *= v
        prods.append(p)
    return elementary_of(prods, m)


def _root_check(poly: WeightedPoly, brute: Callable, d: int, two_blocks: bool, trials: int = 3) -> None:
    rng = random.Random(0)
    for extra in (0, 1):
        for _ in range(trials):
            xs = [rng.randint(-3, 3) for _ in range(d + extra)]
            vals = {f"e{i}": elementary_of(xs, i) for i in range(1, d + 1)}
            if two_blocks:
                ys = [rng.randint(-3, 3) for _ in range(d + extra)]
                vals.update({f"f{i}": elementary_of(ys, i) for i in range(1, d + 1)})
                expect = brute(xs, ys)
            else:
                expect = brute(xs)
            got = poly.evaluate({n: vals[n] for n in poly.names})
            if got != expect:
                raise AssertionError(f"root stability check failed: {got} != {expect} on {xs}")
