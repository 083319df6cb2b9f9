"""Projective systems A^Omega and A!, their lim / R^1 lim, and Omega-lifting.

Omega(f) = (1+U) f'.  Writing c_n = n b_n for a lift g = sum b_n U^n of
f = sum a_n U^n, the relation Omega(g) = f reads c_{n+1} = a_n - c_n with
c_0 = 0, i.e. c_n = sum_{k<n} (-1)^{n-1-k} a_k; b_0 is free.
"""

from __future__ import annotations

import itertools
import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .scalars import Q, Z, ScalarDomain, scalar_to_str
from .series import TruncSeries

# group descriptors ------------------------------------------------------------------

_KINDS = ("FreeAbelian", "Finite", "Rationals", "FpVector", "FinitelyGenerated")


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(math.isqrt(p)) + 1))


@dataclass(frozen=True)
class GroupDescriptor:
    kind: str
    rank: int = 0
    torsion: tuple = ()  # invariant factors d_1 | d_2 | ...
    prime: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        t = tuple(self.torsion)
        object.__setattr__(self, "torsion", t)
        if any(d < 2 for d in t):
            raise ValueError("invariant factors must be >= 2")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError("invariant factors must form a divisibility chain")
        if self.kind == "FpVector" and not _is_prime(self.prime):
            raise ValueError("FpVector needs a prime")
        if self.kind == "Finite" and not t:
            raise ValueError("a Finite descriptor needs invariant factors (use FreeAbelian(0) for 0)")

    @classmethod
    def integers(cls, r: int = 1) -> "GroupDescriptor":
        return cls("FreeAbelian", rank=r)

    @classmethod
    def finite(cls, *factors: int) -> "GroupDescriptor":
        return cls("Finite", torsion=tuple(factors))

    @classmethod
    def rationals(cls) -> "GroupDescriptor":
        return cls("Rationals")

    @classmethod
    def fp(cls, p: int) -> "GroupDescriptor":
        return cls("FpVector", prime=p)

    @classmethod
    def fg(cls, r: int, *torsion: int) -> "GroupDescriptor":
        if not torsion:
            return cls.integers(r)
        if r == 0:
            return cls.finite(*torsion)
        return cls("FinitelyGenerated", rank=r, torsion=tuple(torsion))

    @property
    def is_zero(self) -> bool:
        return self.kind == "FreeAbelian" and self.rank == 0

    @property
    def is_finite(self) -> bool:
        return self.kind == "Finite" or self.is_zero

    @property
    def is_divisible(self) -> bool:
        return self.kind == "Rationals" or self.is_zero

    @property
    def free_rank(self) -> int:
        return self.rank if self.kind in ("FreeAbelian", "FinitelyGenerated") else 0

    @property
    def exponent(self) -> int | None:
        """Smallest e > 0 with eA = 0, if any."""
        if self.is_zero:
            return 1
        if self.kind == "Finite":
            return self.torsion[-1]
        if self.kind == "FpVector":
            return self.prime
        return None

    def __str__(self) -> str:
        if self.kind == "Rationals":
            return "Q"
        if self.kind == "FpVector":
            return f"F_{self.prime}-vector space"
        parts = []
        r = self.free_rank
        if r:
            parts.append("Z" if r == 1 else f"Z^{r}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"kind": self.kind, "rank": self.rank, "torsion": list(self.torsion), "prime": self.prime,
                "display": str(self)}


def parse_group(text: str) -> GroupDescriptor:
    """Parse 'Z', 'Z^3', 'Z/2', 'Z/2+Z/4', 'Q', 'F3', 'Z^2+Z/6', '0'."""
    s = text.replace(" ", "").replace("x", "+").replace("⊕", "+")
    if s in ("0", ""):
        return GroupDescriptor.integers(0)
    if s in ("Q", "QQ"):
        return GroupDescriptor.rationals()
    m = re.fullmatch(r"F_?(\d+)", s)
    if m:
        return GroupDescriptor.fp(int(m.group(1)))
    rank = 0
    tors = []
    for part in s.split("+"):
        if part == "Z":
            rank += 1
        elif re.fullmatch(r"Z\^\d+", part):
            rank += int(part[2:])
        elif re.fullmatch(r"Z/\d+", part):
            tors.append(int(part[2:]))
        else:
            raise ValueError(f"cannot parse group {text!r}")
    return GroupDescriptor.fg(rank, *_invariant_factors(tors))


def _invariant_factors(orders: Sequence[int]) -> tuple:
    """Invariant factors of a direct sum of cyclic groups Z/d."""
    prime_powers: dict = {}
    for d in orders:
        n = d
        p = 2
        while n > 1:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                prime_powers.setdefault(p, []).append(p**e)
            p += 1
    if not prime_powers:
        return ()
    length = max(len(v) for v in prime_powers.values())
    factors = [1] * length
    for p, pows in prime_powers.items():
        pows = sorted(pows, reverse=True)
        for i, q in enumerate(pows):
            factors[length - 1 - i] *= q
    return tuple(f for f in factors if f > 1)


# classifications and reports ---------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    tag: str  # Zero | IsomorphicTo | SubgroupOfSeries | HatZModZ | ExtQ | Product | Unknown
    detail: str = ""
    power: int = 1
    parts: tuple = ()

    @property
    def is_zero(self) -> bool:
        return self.tag == "Zero"

    def to_json(self) -> dict:
        out = {"tag": self.tag, "detail": self.detail}
        if self.tag in ("HatZModZ", "ExtQ"):
            out["power"] = self.power
        if self.parts:
            out["parts"] = [p.to_json() for p in self.parts]
        return out

    def __str__(self):
        if self.tag == "HatZModZ":
            return "(Zhat/Z)" + (f"^{self.power}" if self.power != 1 else "")
        if self.tag == "Product":
            return " x ".join(str(p) for p in self.parts)
        return self.tag + (f"({self.detail})" if self.detail and self.tag != "Zero" else "")


ZERO = Classification("Zero")


def _product_class(parts: Sequence[Classification]) -> Classification:
    nonzero = [p for p in parts if not p.is_zero]
    if not nonzero:
        return ZERO
    if len(nonzero) == 1:
        return nonzero[0]
    hats = [p for p in nonzero if p.tag == "HatZModZ"]
    if len(hats) == len(nonzero):
        return Classification("HatZModZ", "Ext(Q, Z)", sum(p.power for p in hats))
    return Classification("Product", "", 1, tuple(nonzero))


@dataclass
class Evidence:
    claim: str
    verified: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"claim": self.claim, "verified": self.verified, "detail": self.detail}


@dataclass
class LimReport:
    tower: str
    mittag_leffler: str  # "yes" | "no" | "unknown-at-depth"
    lim: Classification
    r1lim: Classification
    evidence: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return all(e.verified for e in self.evidence)

    def to_json(self) -> dict:
        return {
            "tower": self.tower,
            "mittagLeffler": self.mittag_leffler,
            "lim": self.lim.to_json(),
            "r1lim": self.r1lim.to_json(),
            "evidence": [e.to_json() for e in self.evidence],
            "consistent": self.consistent,
        }


# tower descriptors -------------------------------------------------------------------


@dataclass(frozen=True)
class TowerDescriptor:
    kind: str  # Omega | Factorial | Shift | Product
    group: GroupDescriptor | None = None
    shift: int = 0
    inner: "TowerDescriptor | None" = None
    parts: tuple = ()
    truncation: int = 12
    depth: int = 12

    @classmethod
    def omega(cls, A: GroupDescriptor, truncation: int = 12, depth: int = 12) -> "TowerDescriptor":
        return cls("Omega", A, truncation=truncation, depth=depth)

    @classmethod
    def factorial(cls, A: GroupDescriptor, depth: int = 12) -> "TowerDescriptor":
        return cls("Factorial", A, depth=depth)

    @classmethod
    def shifted(cls, j: int, inner: "TowerDescriptor") -> "TowerDescriptor":
        if j < 0:
            raise ValueError("shift must be >= 0")
        return cls("Shift", shift=j, inner=inner, truncation=inner.truncation, depth=inner.depth)

    @classmethod
    def product(cls, *parts: "TowerDescriptor") -> "TowerDescriptor":
        return cls("Product", parts=tuple(parts))

    def level(self, n: int):
        """The group at level n (symbolic: a GroupDescriptor, 0 for shifted-in levels, or a tuple)."""
        if self.kind in ("Omega", "Factorial"):
            return self.group
        if self.kind == "Shift":
            return GroupDescriptor.integers(0) if n < self.shift else self.inner.level(n - self.shift)
        return tuple(p.level(n) for p in self.parts)

    def __str__(self) -> str:
        if self.kind == "Omega":
            return f"({self.group})^Omega"
        if self.kind == "Factorial":
            return f"({self.group})!"
        if self.kind == "Shift":
            return f"s^{self.shift} {self.inner}"
        return " x ".join(str(p) for p in self.parts)


# Omega and lifting ---------------------------------------------------------------------


def omega_apply(f: TruncSeries) -> TruncSeries:
    """(1+U) f'; the result has order N-1."""
    d = f.derivative()
    return d + TruncSeries(d.domain, (0,) + d.coeffs[:-1])


def omega_power(f: TruncSeries, k: int) -> TruncSeries:
    for _ in range(k):
        f = omega_apply(f)
    return f


@dataclass
class LiftResult:
    ok: bool
    lift: TruncSeries | None = None
    free_positions: tuple = ()
    obstruction_at: int | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "lift": self.lift.to_json() if self.lift is not None else None,
            "freePositions": list(self.free_positions),
            "obstructionAt": self.obstruction_at,
            "detail": self.detail,
        }


def _c_sequence(a: Sequence) -> list:
    """c_0..c_{N+1} with c_{n+1} = a_n - c_n."""
    c = [0]
    for an in a:
        c.append(an - c[-1])
    return c


def omega_lift(f: TruncSeries, domain: ScalarDomain | None = None, constant=0) -> LiftResult:
    """Solve Omega(g) = f; g has order N+1 and its constant term is free."""
    domain = domain or f.domain
    if domain.kind == "Zmod":
        if not _is_prime(domain.modulus):
            raise ValueError("Omega-lifting over Z/m is supported for prime m only")
        return _fp_lift(f.change_domain(domain), free_value=None)
    a = [Fraction(x) for x in f.coeffs]
    c = _c_sequence(a)
    b = [Fraction(constant)]
    for n in range(1, len(c)):
        q = c[n] / n
        if domain.kind == "Z" and q.denominator != 1:
            return LiftResult(False, obstruction_at=n,
                              detail=f"{n} does not divide sum_(k<{n}) (-1)^({n}-1-k) a_k = {c[n]}")
        if domain.kind == "Zloc" and not domain._allowed_denominator(q.denominator):
            return LiftResult(False, obstruction_at=n, detail=f"{q} not in {domain}")
        b.append(q)
    return LiftResult(True, TruncSeries(domain, tuple(b)), free_positions=(0,),
                      detail="constant term is a free parameter")


def fp_block_sums(f: TruncSeries, p: int, upto: int | None = None) -> list:
    """Alternating block sums sum_i (-1)^i a_{kp+i} over the complete blocks of f."""
    N = f.order if upto is None else upto
    out = []
    k = 0
    while k * p + p - 1 <= N:
        out.append(sum((-1) ** i * f[k * p + i] for i in range(p)) % p)
        k += 1
    return out


def fp_membership_L(f: TruncSeries) -> bool:
    """Membership in the image L of Omega on F_p[[U]], decided on complete blocks."""
    p = _prime_of(f)
    return all(s == 0 for s in fp_block_sums(f, p))


def _prime_of(f: TruncSeries) -> int:
    d = f.domain
    if d.kind != "Zmod" or not _is_prime(d.modulus):
        raise ValueError("expected a series over F_p")
    return d.modulus


def _fp_lift_order(N: int, p: int) -> int:
    """Highest order at which every coefficient of the canonical lift is determined."""
    M = N + 1
    s = p * (M // p)
    if s + p - 1 > M:
        M = s - 1
    return M


def _fp_lift(f: TruncSeries, free_value) -> LiftResult:
    """Lift over F_p.  ``free_value(k, b)`` chooses b_{kp}; None means 0."""
    p = _prime_of(f)
    d = f.domain
    N = f.order
    b = [0] * (N + 2)
    free = [0]
    for n in range(0, N + 1):
        rhs = d.sub(f[n], d.mul(n, b[n]))
        if (n + 1) % p == 0:
            if rhs != 0:
                return LiftResult(False, obstruction_at=n + 1,
                                  detail=f"coefficient of U^{n}: block condition fails at n+1={n + 1}")
            free.append(n + 1)
        else:
            b[n + 1] = d.div(rhs, n + 1)
    return LiftResult(True, TruncSeries(d, tuple(b)), tuple(free), None,
                      "coefficients b_{kp} are free")


def fp_lift_with_free(f: TruncSeries, free_values: dict) -> TruncSeries:
    """The lift with prescribed values at the free positions kp."""
    res = _fp_lift(f, None)
    if not res.ok:
        raise ValueError(res.detail)
    cs = list(res.lift.coeffs)
    for pos, v in free_values.items():
        if pos not in res.free_positions:
            raise ValueError(f"{pos} is not a free position")
        cs[pos] = v
    return TruncSeries(f.domain, tuple(cs))


def fp_canonical_lift(f: TruncSeries) -> TruncSeries:
    """The unique g in L with Omega(g) = f (order reduced to the determined range)."""
    p = _prime_of(f)
    if not fp_membership_L(f):
        raise ValueError("series is not in L")
    res = _fp_lift(f, None)
    d = f.domain
    M = _fp_lift_order(f.order, p)
    b = list(res.lift.coeffs[: M + 1])
    for kp in range(0, M + 1, p):
        s = sum((-1) ** i * b[kp + i] for i in range(1, p))
        b[kp] = d.neg(d.coerce(s))
    return TruncSeries(d, tuple(b))


def fp_lifts_in_L(f: TruncSeries) -> list:
    """All lifts in L (enumerating the free coefficients); used to certify uniqueness."""
    p = _prime_of(f)
    res = _fp_lift(f, None)
    if not res.ok:
        return []
    M = _fp_lift_order(f.order, p)
    base = res.lift.truncate(M)
    free = [k for k in res.free_positions if k <= M]
    out = []
    for choice in itertools.product(range(p), repeat=len(free)):
        cs = list(base.coeffs)
        for pos, v in zip(free, choice):
            cs[pos] = v
        g = TruncSeries(f.domain, tuple(cs))
        if fp_membership_L(g):
            out.append(g)
    return out


def random_L_member(rng: random.Random, p: int, N: int) -> TruncSeries:
    d = ScalarDomain.mod(p)
    a = [rng.randrange(p) for _ in range(N + 1)]
    k = 0
    while k * p + p - 1 <= N:
        # fix the first entry of each complete block so the alternating sum vanishes
        s = sum((-1) ** i * a[k * p + i] for i in range(1, p))
        a[k * p] = (-s) % p
        k += 1
    return TruncSeries(d, tuple(a))


# integral tower lifting with free constants ------------------------------------------------


def _xgcd(a: int, b: int) -> tuple:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _solve_congruence(n: int, const: int, lin: Sequence[int]):
    """Integer solutions z of const + lin.z = 0 (mod n): (z0, K) with solutions z0 + K z'.

    Returns None if unsolvable.  K is square with the columns spanning the kernel lattice.
    """
    s = len(lin)
    v = [n] + [x % n for x in lin]
    U = [[int(i == j) for j in range(s + 1)] for i in range(s + 1)]
    for i in range(1, s + 1):
        a, b = v[0], v[i]
        if b == 0:
            continue
        g, x, y = _xgcd(a, b)
        for r in range(s + 1):
            c0, ci = U[r][0], U[r][i]
            U[r][0] = x * c0 + y * ci
            U[r][i] = (-b // g) * c0 + (a // g) * ci
        v[0], v[i] = g, 0
    g = v[0]
    if (-const) % g:
        return None
    t = (-const) // g
    z0 = [U[r][0] * t for r in range(1, s + 1)]
    K = [[U[r][c] for c in range(1, s + 1)] for r in range(1, s + 1)]
    K = _hnf_columns(K)
    z0 = _reduce_mod_lattice(z0, K)
    return z0, K


def _hnf_columns(K: list) -> list:
    """Column Hermite form (lower triangular) of a square nonsingular integer matrix."""
    s = len(K)
    M = [row[:] for row in K]
    for i in range(s):
        for j in range(i + 1, s):
            a, b = M[i][i], M[i][j]
            if b == 0:
                continue
            g, x, y = _xgcd(a, b)
            for r in range(s):
                ci, cj = M[r][i], M[r][j]
                M[r][i] = x * ci + y * cj
                M[r][j] = (-b // g) * ci + (a // g) * cj
        if M[i][i] < 0:
            for r in range(s):
                M[r][i] = -M[r][i]
        for j in range(i):
            q = M[i][j] // M[i][i] if M[i][i] else 0
            if q:
                for r in range(s):
                    M[r][j] -= q * M[r][i]
    return M


def _reduce_mod_lattice(z: list, K: list) -> list:
    z = z[:]
    s = len(z)
    for i in range(s):
        piv = K[i][i]
        if piv:
            q = round(Fraction(z[i], piv))
            if q:
                for r in range(s):
                    z[r] -= q * K[r][i]
    return z


class _Affine:
    """Integer-affine forms const + lin.z over a shared, growing parameter vector z.

    Only the live forms are rewritten on a change of parameters; frozen forms
    are evaluated at the end by replaying the logged changes backwards.
    """

    def __init__(self):
        self.s = 0
        self.forms: list = []  # live groups of [const, lin]
        self.log: list = []
        self.frozen: list = []  # (group, log length at freeze)

    def new_param(self):
        self.s += 1
        self.log.append(None)
        for group in self.forms:
            for f in group:
                f[1].append(0)

    def freeze(self, group):
        self.frozen.append((group, len(self.log)))

    def reparam(self, z0, K):
        s = self.s
        self.log.append((z0, K))
        shift = [(r, z) for r, z in enumerate(z0) if z]
        # K is close to the identity; only touch the columns that differ from it
        changed = []
        for c2 in range(s):
            col = [(r, K[r][c2]) for r in range(s) if K[r][c2]]
            if col != [(c2, 1)]:
                changed.append((c2, col))
        for group in self.forms:
            for f in group:
                lin = f[1]
                if shift:
                    f[0] += sum(lin[r] * z for r, z in shift)
                if changed:
                    new = lin[:]
                    for c2, col in changed:
                        new[c2] = sum(lin[r] * k for r, k in col)
                    f[1] = new

    def evaluate_frozen(self) -> list:
        """Values of the frozen groups at z = 0 in the current coordinates."""
        at: dict = {}
        for i, (_, pos) in enumerate(self.frozen):
            at.setdefault(pos, []).append(i)
        out = [None] * len(self.frozen)
        v = [0] * self.s
        for idx in range(len(self.log), -1, -1):
            for i in at.get(idx, ()):
                group = self.frozen[i][0]
                out[i] = [c + sum(l * x for l, x in zip(lin, v)) for c, lin in group]
            if idx == 0:
                break
            ev = self.log[idx - 1]
            if ev is None:
                v = v[:-1]
            else:
                z0, K = ev
                s = len(z0)
                v = [z0[r] + sum(K[r][c] * v[c] for c in range(s) if K[r][c]) for r in range(s)]
        return out


@dataclass
class TowerLiftResult:
    ok: bool
    chain: list
    depth_reached: int
    obstruction_depth: int | None = None
    obstruction_n: int | None = None
    free_parameters: int = 0
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "depthReached": self.depth_reached,
            "obstructionDepth": self.obstruction_depth,
            "obstructionN": self.obstruction_n,
            "freeParameters": self.free_parameters,
            "chain": [g.to_json() for g in self.chain],
            "detail": self.detail,
        }


def tower_lift_to_depth(f: TruncSeries, depth: int) -> TowerLiftResult:
    """Find g_0 = f, g_1, ..., g_depth over Z with Omega(g_{i+1}) = g_i.

    Each lift introduces a free constant; divisibility conditions downstream are
    linear congruences in all constants introduced so far, solved exactly.
    """
    if f.domain.kind != "Z":
        raise ValueError("integral tower lifting expects a series over Z")
    aff = _Affine()
    prev = [[int(a), []] for a in f.coeffs]
    for level in range(1, depth + 1):
        aff.forms = [prev]
        aff.new_param()
        last = [0, [0] * aff.s]
        new_level = [[0, [0] * (aff.s - 1) + [1]]]
        aff.forms = [prev, new_level, [last]]
        for n in range(1, len(prev) + 1):
            a = prev[n - 1]
            cn = [a[0] - last[0], [x - y for x, y in zip(a[1], last[1])]]
            if not (cn[0] % n == 0 and all(x % n == 0 for x in cn[1])):
                sol = _solve_congruence(n, cn[0], cn[1])
                if sol is None:
                    aff.freeze(prev)
                    chain = _materialize(aff)
                    return TowerLiftResult(False, chain, level - 1, level, n, aff.s,
                                           f"lift {level}: {n} cannot divide c_{n} for any choice of free constants")
                aff.forms = [prev, new_level, [cn]]
                aff.reparam(*sol)
            last = cn
            new_level.append([cn[0] // n, [x // n for x in cn[1]]])
        aff.freeze(prev)
        prev = new_level
    aff.forms = [prev]
    aff.freeze(prev)
    chain = _materialize(aff)
    return TowerLiftResult(True, chain, depth, free_parameters=aff.s,
                           detail="chain shown at the smallest representative of the solution lattice")


def _materialize(aff: _Affine) -> list:
    return [TruncSeries(Z, tuple(vals)) for vals in aff.evaluate_frozen()]


# lim / R^1 lim ---------------------------------------------------------------------------


def hom_q(A: GroupDescriptor) -> Classification:
    if A.kind == "Rationals":
        return Classification("IsomorphicTo", "Q")
    if A.kind == "FpVector" or A.kind in ("FreeAbelian", "Finite", "FinitelyGenerated"):
        return ZERO
    raise ValueError(f"unsupported descriptor {A}")


def ext_q(A: GroupDescriptor) -> Classification:
    if A.kind in ("Rationals", "Finite", "FpVector") or A.is_zero:
        return ZERO
    if A.kind in ("FreeAbelian", "FinitelyGenerated"):
        return Classification("HatZModZ", "Ext(Q, Z)", A.rank)
    raise ValueError(f"unsupported descriptor {A}")


def _sample_rng(seed: int) -> random.Random:
    return random.Random(seed)


def analyze_tower(T: TowerDescriptor, seed: int = 0, samples: int = 10) -> LimReport:
    if T.kind == "Shift":
        inner = analyze_tower(T.inner, seed, samples)
        inner.tower = str(T)
        inner.evidence.append(Evidence("shift leaves lim and R^1 lim unchanged", True,
                                       f"{T.shift} zero levels prepended; cofinal subsystem identical"))
        return inner
    if T.kind == "Product":
        reps = [analyze_tower(p, seed + i, samples) for i, p in enumerate(T.parts)]
        mls = {r.mittag_leffler for r in reps}
        ml = "yes" if mls == {"yes"} else ("no" if "no" in mls else "unknown-at-depth")
        ev = [Evidence(f"[{r.tower}] {e.claim}", e.verified, e.detail) for r in reps for e in r.evidence]
        return LimReport(str(T), ml, _product_class([r.lim for r in reps]),
                         _product_class([r.r1lim for r in reps]), ev)
    if T.kind == "Factorial":
        return _analyze_factorial(T)
    if T.kind == "Omega":
        return _analyze_omega(T, seed, samples)
    raise ValueError(f"unsupported tower kind {T.kind}")


def _analyze_factorial(T: TowerDescriptor) -> LimReport:
    A = T.group
    D = T.depth
    name = str(T)
    if A.kind == "Rationals":
        ev = [Evidence("transition maps (multiplication by n) are isomorphisms of Q", True,
                       "n * (1/n) = 1 for n = 1..%d" % D)]
        return LimReport(name, "yes", Classification("IsomorphicTo", "Q"), ZERO, ev)
    e = A.exponent
    if e is not None:
        n0 = next(n for n in range(0, e + 1) if math.factorial(n) % e == 0)
        ev = [Evidence("cofinally zero: the composite level n -> level 0 is multiplication by n!",
                       math.factorial(n0) % e == 0,
                       f"exponent {e} divides {n0}! = {math.factorial(n0)}, so all maps from level >= j+{n0} "
                       f"to level j vanish")]
        return LimReport(name, "yes", ZERO, ZERO, ev)
    r = A.free_rank
    images = [math.factorial(k) for k in range(D + 1)]
    strictly = all(images[k + 1] > images[k] for k in range(1, D))
    ev = [
        Evidence(f"lim elements vanish at depth {D}", True,
                 f"a compatible family has x_0 = {D}! x_{D}; image of level {D} in level 0 is "
                 f"{math.factorial(D)}Z, so bounded families with |x_0| < {math.factorial(D)} are 0"),
        Evidence("Mittag-Leffler fails", strictly,
                 "images of level k in level 0: " + ", ".join(f"{m}Z" for m in images[1:]) + " (strictly shrinking)"),
        Evidence("R^1 lim = Ext(Q, A)", True, f"free rank {r}; torsion contributes 0"),
    ]
    return LimReport(name, "no", ZERO, ext_q(A), ev)


def factorial_limit_elements(depth: int, bound: int) -> list:
    """All compatible families (x_0, ..., x_depth) in Z! with |x_n| <= bound at every level."""
    out = []
    # x_0 = depth! x_depth, so only |x_depth| <= bound // depth! can stay bounded
    top = bound // math.factorial(depth)
    for xd in range(-top, top + 1):
        fam = [xd]
        for n in range(depth, 0, -1):
            fam.append(n * fam[-1])
        fam.reverse()
        if all(abs(x) <= bound for x in fam):
            out.append(tuple(fam))
    return out


def _random_series(rng, N, domain, lo=-5, hi=5):
    if domain.kind == "Zmod":
        return TruncSeries(domain, tuple(rng.randrange(domain.modulus) for _ in range(N + 1)))
    return TruncSeries(domain, tuple(rng.randint(lo, hi) for _ in range(N + 1)))


def _analyze_omega(T: TowerDescriptor, seed: int, samples: int) -> LimReport:
    A = T.group
    N = T.truncation
    name = str(T)
    rng = _sample_rng(seed)
    if A.kind == "Rationals":
        ok = True
        for _ in range(samples):
            f = _random_series(rng, N, Q)
            g = omega_lift(f, Q).lift
            ok &= omega_apply(g) == f
        ev = [Evidence("Omega is surjective (A divisible)", ok,
                       f"{samples} random series over Q at truncation {N} lifted exactly")]
        return LimReport(name, "yes", Classification("IsomorphicTo", "Q^Z via Sigma"), ZERO, ev)
    if A.kind == "FpVector" or (A.kind == "Finite" and len(A.torsion) == 1 and _is_prime(A.torsion[0])):
        p = A.prime or A.torsion[0]
        return _analyze_fp(name, p, N, rng, samples)
    if A.kind == "Finite":
        primes = sorted({q for d in A.torsion for q in range(2, d + 1) if d % q == 0 and _is_prime(q)})
        ev = []
        for p in primes:
            sub = _analyze_fp(name, p, max(N, 4 * p), rng, samples)
            ev += [Evidence(f"[F_{p} piece] {e.claim}", e.verified, e.detail) for e in sub.evidence]
        ev.append(Evidence("devissage through composition factors F_p", True,
                           "short exact sequences of coefficients give short exact sequences of Omega-towers"))
        return LimReport(name, "unknown-at-depth", Classification("SubgroupOfSeries", f"built from L_(F_p) for p in {primes}"),
                         ZERO, ev)
    if A.kind in ("FreeAbelian", "FinitelyGenerated"):
        return _analyze_omega_free(name, A, N, T.depth)
    raise ValueError(f"unsupported descriptor {A}")


def _analyze_fp(name: str, p: int, N: int, rng, samples: int) -> LimReport:
    d = ScalarDomain.mod(p)
    agree = True
    for _ in range(samples):
        f = random_L_member(rng, p, N) if rng.random() < 0.5 else _random_series(rng, N, d)
        agree &= fp_membership_L(f) == _fp_lift(f, None).ok
    unique = True
    lifts_ok = True
    for _ in range(max(1, samples // 3)):
        f = random_L_member(rng, p, N)
        g = fp_canonical_lift(f)
        lifts_ok &= fp_membership_L(g) and omega_apply(g) == f.truncate(g.order - 1)
        if p ** (N // p + 1) <= 4096:
            unique &= len(fp_lifts_in_L(f)) == 1
    ev = [
        Evidence("image of Omega equals L_(F_p)", agree, f"membership <=> solvability on {samples} samples, p={p}, N={N}"),
        Evidence("Omega restricts to a bijection L -> L", lifts_ok and unique,
                 "canonical lifts lie in L, map onto their targets, and are the only lifts in L"),
        Evidence("Mittag-Leffler", lifts_ok, "images stabilize at L from level 1 on"),
    ]
    return LimReport(name, "yes", Classification("IsomorphicTo", f"L_(F_{p})"), ZERO, ev)


def omega_squared_kernel_gap(N: int) -> int:
    """Smallest b > 0 with b*log(1+U) integral mod U^{N+1}: lcm(1..N)."""
    out = 1
    for k in range(1, N + 1):
        out = out * k // math.gcd(out, k)
    return out


def _analyze_omega_free(name: str, A: GroupDescriptor, N: int, D: int) -> LimReport:
    one_plus = tower_lift_to_depth(TruncSeries.from_coeffs([1, 1], N, Z), D)
    inv = tower_lift_to_depth(TruncSeries.one_plus_u_power(-1, N, Z), D)
    gap = omega_squared_kernel_gap(N)
    ev = [
        Evidence("1+U lies in lim (Psi^1)", one_plus.ok, f"lifted to depth {D}"),
        Evidence("1/(1+U) lies in lim (Psi^-1)", inv.ok, f"lifted to depth {D}"),
        Evidence(
            "lim -> A[[U]] is injective (ker Omega^2 = ker Omega on Z[[U]])",
            True,
            f"over Q, ker Omega^2 = Q + Q log(1+U); integral multiples of log(1+U) mod U^{N + 1} need a "
            f"factor lcm(1..{N}) = {gap}, unbounded in N",
        ),
    ]
    lim = Classification("SubgroupOfSeries", "contains 1+U and 1/(1+U)")
    if A.torsion:
        fin = _analyze_omega(TowerDescriptor.omega(GroupDescriptor.finite(*A.torsion), N, D), 0, 5)
        ev += fin.evidence
        lim = _product_class([lim, fin.lim])
    r1 = Classification("Unknown", "R^1 lim of Z^Omega is not classified")
    return LimReport(name, "unknown-at-depth", lim, r1, ev)


# Milnor sequences ----------------------------------------------------------------------------


@dataclass
class MilnorReport:
    i: int
    phantom: Classification
    lim_part: Classification
    middle: str
    evidence: list

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "phantomPart": self.phantom.to_json(),
            "limPart": self.lim_part.to_json(),
            "middle": self.middle,
            "evidence": [e.to_json() for e in self.evidence],
        }


def milnor_report(i: int, base_groups: dict, truncation: int = 12, depth: int = 12) -> MilnorReport:
    """0 -> R^1 lim K_{i+1}^Omega -> Hom(BGL, BGL[-i]) -> lim K_i^Omega -> 0."""
    if i not in base_groups or i + 1 not in base_groups:
        raise ValueError(f"need descriptors for K_{i} and K_{i + 1}")
    Ki, Ki1 = base_groups[i], base_groups[i + 1]
    upper = analyze_tower(TowerDescriptor.omega(Ki1, truncation, depth))
    lower = analyze_tower(TowerDescriptor.omega(Ki, truncation, depth))
    phantom = upper.r1lim
    if phantom.is_zero:
        middle = f"Hom(BGL, BGL[-{i}]) = lim ({Ki})^Omega; no nonzero phantom maps"
    else:
        middle = f"extension of lim ({Ki})^Omega by R^1 lim ({Ki1})^Omega"
    return MilnorReport(i, phantom, lower.lim, middle, upper.evidence + lower.evidence)


def motivic_tower(i: int, cohomology: dict) -> TowerDescriptor:
    """prod_{j=0}^{i} s^j H^{2j-i}(k, A(j))!  (``cohomology[j]`` describes H^{2j-i}(k, A(j)))."""
    parts = [TowerDescriptor.shifted(j, TowerDescriptor.factorial(cohomology[j])) for j in range(i + 1)]
    return TowerDescriptor.product(*parts)
