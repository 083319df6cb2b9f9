"""B[x_1..x_m]/(x_i^{n_i+1}): the common shape of K_0 and CH^* of a product of projective spaces."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .scalars import Q, DomainError, ScalarDomain, normalize, scalar_from_str, scalar_to_str
from .series import TruncSeries


@dataclass(frozen=True, eq=False)
class NilPoly:
    dims: tuple
    terms: Mapping  # exponent tuple -> nonzero int/Fraction

    def __post_init__(self):
        dims = tuple(self.dims)
        clean = {}
        for e, c in self.terms.items():
            e = tuple(e)
            if len(e) != len(dims):
                raise ValueError(f"exponent {e} does not match dims {dims}")
            if any(a > n for a, n in zip(e, dims)):
                continue
            c = normalize(c)
            if c:
                clean[e] = c
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def zero(cls, dims) -> "NilPoly":
        return cls(tuple(dims), {})

    @classmethod
    def const(cls, dims, c) -> "NilPoly":
        return cls(tuple(dims), {(0,) * len(dims): c})

    @classmethod
    def gen(cls, dims, i: int) -> "NilPoly":
        e = [0] * len(dims)
        e[i] = 1
        return cls(tuple(dims), {tuple(e): 1})

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def _same(self, other: "NilPoly"):
        if self.dims != other.dims:
            raise ValueError(f"space mismatch {self.dims} vs {other.dims}")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NilPoly.const(self.dims, other)
        if not isinstance(other, NilPoly):
            return NotImplemented
        return self.dims == other.dims and self.terms == other.terms

    def __hash__(self):
        return hash((self.dims, frozenset(self.terms.items())))

    def __add__(self, other):
        if not isinstance(other, NilPoly):
            other = NilPoly.const(self.dims, other)
        self._same(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return NilPoly(self.dims, out)

    __radd__ = __add__

    def __neg__(self):
        return NilPoly(self.dims, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "NilPoly":
        return NilPoly(self.dims, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NilPoly):
            return self.scale(other)
        self._same(other)
        dims = self.dims
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if any(a > n for a, n in zip(e, dims)):
                    continue
                out[e] = out.get(e, 0) + c1 * c2
        return NilPoly(dims, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "NilPoly":
        if k < 0:
            return self.inverse() ** (-k)
        out = NilPoly.const(self.dims, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def constant_term(self):
        return self.terms.get((0,) * len(self.dims), 0)

    def nilpotent_part(self) -> "NilPoly":
        return self - self.constant_term()

    def inverse(self, domain: ScalarDomain = Q) -> "NilPoly":
        """Inverse when the constant term is a unit of ``domain``; the rest is nilpotent."""
        c = self.constant_term()
        if not domain.is_unit(domain.coerce(c)):
            raise DomainError(f"constant term {c} is not a unit in {domain}")
        ci = normalize(Fraction(1) / Fraction(c)) if domain.kind != "Zmod" else domain.inv(c)
        x = self.nilpotent_part().scale(ci)
        # (c(1+x))^{-1} = c^{-1} sum (-x)^j
        out = NilPoly.const(self.dims, 1)
        term = NilPoly.const(self.dims, 1)
        for _ in range(self.total_dim):
            term = term * (-x)
            if not term.terms:
                break
            out = out + term
        return out.scale(ci)

    def apply_series(self, f: TruncSeries) -> "NilPoly":
        """f(self) for nilpotent self (zero constant term); needs f.order >= total_dim."""
        if self.constant_term() != 0:
            raise ValueError("series substitution needs a nilpotent argument")
        top = min(f.order, self.total_dim)
        if f.order < self.total_dim and (self ** (f.order + 1)).terms:
            raise ValueError(f"series order {f.order} too low for an element of nilpotence > {f.order}")
        out = NilPoly.zero(self.dims)
        for c in reversed(f.coeffs[: top + 1]):
            out = out * self + c
        return out

    def degree_part(self, j: int) -> "NilPoly":
        return NilPoly(self.dims, {e: c for e, c in self.terms.items() if sum(e) == j})

    def coefficient(self, e: Sequence[int]):
        return self.terms.get(tuple(e), 0)

    def is_integral(self) -> bool:
        return all(not isinstance(c, Fraction) for c in self.terms.values())

    def denominators(self) -> set:
        return {Fraction(c).denominator for c in self.terms.values()}

    def pullback(self, extra_dims: Sequence[int]) -> "NilPoly":
        """Pull back along the projection X x P^{extra} -> X."""
        k = len(extra_dims)
        return NilPoly(self.dims + tuple(extra_dims), {e + (0,) * k: c for e, c in self.terms.items()})

    def extract_last(self, count: int, exps: Sequence[int]) -> "NilPoly":
        """Coefficient of x_last^exps (last ``count`` variables), as a class on the remaining factors."""
        keep = len(self.dims) - count
        out = {}
        for e, c in self.terms.items():
            if tuple(e[keep:]) == tuple(exps):
                out[e[:keep]] = out.get(e[:keep], 0) + c
        return NilPoly(self.dims[:keep], out)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def pretty(self, var: str = "u") -> str:
        parts = []
        for e, c in self.sorted_terms():
            if len(self.dims) == 1:
                mono = "" if e[0] == 0 else (var if e[0] == 1 else f"{var}^{e[0]}")
            else:
                mono = "*".join(
                    f"{var}{i + 1}" if a == 1 else f"{var}{i + 1}^{a}" for i, a in enumerate(e) if a
                )
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

    def __repr__(self):
        return f"NilPoly[{self.dims}]({self.pretty()})"

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "terms": [{"exponents": list(e), "coefficient": scalar_to_str(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data) -> "NilPoly":
        return cls(
            tuple(data["dims"]),
            {tuple(t["exponents"]): scalar_from_str(t["coefficient"]) for t in data["terms"]},
        )


def monomials(dims: Sequence[int]):
    return itertools.product(*(range(n + 1) for n in dims))
