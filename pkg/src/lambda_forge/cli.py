"""Command-line driver: ``lambda-forge <command> [options]``.

Exit codes: 0 success, 1 a verification failed (witnesses in the output),
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Sequence

from .chow import RelativeMap, chern_character, verify_arr, verify_grr, verify_hrr, verify_omega_chi
from .lambda_k import BaseSpace, SplitElement, random_split_element, verify_special_axioms
from .operations import (
    AdditiveOpSeries,
    additive_to_gamma,
    classify_multiplicative_endo,
    gamma_to_additive,
    multiplicative_class,
    star_compose,
)
from .report import emit_report
from .scalars import Q, Z, ScalarDomain, scalar_from_str
from .series import TruncSeries
from .stable import identity, phi, pi_n, psi_stable, sigma, sigma_inverse, stable_compose
from .symmetric import chi_poly, universal_plethysm_poly, universal_product_poly
from .towers import (
    GroupDescriptor,
    TowerDescriptor,
    analyze_tower,
    omega_lift,
    parse_group,
    tower_lift_to_depth,
)

DEFAULT_SEED = 20240601


class ConfigError(ValueError):
    pass


# parsing helpers --------------------------------------------------------------------


def parse_int_list(text: str) -> list:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def parse_range(text: str) -> range:
    """'-6..6' or '-6:6' (inclusive)."""
    for sep in ("..", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            return range(int(lo), int(hi) + 1)
    v = int(text)
    return range(v, v + 1)


def parse_domain(text: str) -> ScalarDomain:
    t = text.strip()
    if t in ("Z", "ZZ"):
        return Z
    if t in ("Q", "QQ"):
        return Q
    if t.startswith("F") or t.startswith("Z/"):
        return ScalarDomain.mod(int(t.lstrip("F_").replace("Z/", "")))
    raise ConfigError(f"unknown scalar domain {text!r}")


def parse_series(text: str, order: int | None, domain: ScalarDomain) -> TruncSeries:
    """Comma-separated coefficients a_0,a_1,... or 'psi:k' for (1+U)^k."""
    t = text.strip()
    if t.startswith("psi:"):
        if order is None:
            raise ConfigError("psi:k needs --truncation")
        return TruncSeries.one_plus_u_power(int(t[4:]), order, domain)
    coeffs = [scalar_from_str(c.strip()) for c in t.split(",") if c.strip()]
    if not coeffs:
        raise ConfigError("empty series")
    return TruncSeries.from_coeffs(coeffs, order, domain)


def _threads() -> int:
    raw = os.environ.get("LAMBDA_FORGE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"LAMBDA_FORGE_THREADS must be an integer, got {raw!r}")
    return max(1, n)


def map_cases(fn: Callable, cases: Sequence) -> list:
    """Order-preserving map, fanned out to a process pool when LAMBDA_FORGE_THREADS > 1."""
    n = _threads()
    if n == 1 or len(cases) < 2:
        return [fn(c) for c in cases]
    with ProcessPoolExecutor(max_workers=min(n, len(cases))) as pool:
        return list(pool.map(fn, cases))


# case workers (module level so they pickle) ----------------------------------------------


def _hrr_case(case):
    d, m = case
    r = verify_hrr(d, m)
    return {"d": d, "m": m, "lhs": r.lhs, "rhs": r.rhs, "equal": r.equal}


def _arr_case(case):
    d, k, m = case
    space = BaseSpace((d,))
    r = verify_arr(RelativeMap.to_point(space), k, SplitElement.line(space, m))
    return {"d": d, "k": k, "m": m, "lhs": r.lhs, "rhs": r.rhs, "equal": r.equal}


def _grr_case(case):
    d, e, seed = case
    rng = random.Random(seed)
    space = BaseSpace((e, d))
    x = random_split_element(rng, space)
    r = verify_grr(RelativeMap.forget_last(space), x)
    return {"d": d, "e": e, "x": x.to_json(), "lhs": r.lhs, "rhs": r.rhs, "equal": r.equal}


# commands ---------------------------------------------------------------------------


def _header(args, **extra) -> dict:
    out = {"command": args.command if args.command != "verify" else f"verify {args.what}", "seed": args.seed}
    out.update(extra)
    return out


def cmd_chi_table(args) -> tuple:
    rows = [{"n": n, "chi": chi_poly(n).pretty()} for n in range(1, args.n + 1)]
    return _header(args, rows=rows), True


def cmd_universal_poly(args) -> tuple:
    if args.kind == "product":
        P = universal_product_poly(args.n)
        name = f"P_{args.n}"
    else:
        P = universal_plethysm_poly(args.m, args.n)
        name = f"P_{args.m},{args.n}"
    return _header(args, name=name, poly=P.pretty(), terms=P.to_json()), True


def cmd_star_compose(args) -> tuple:
    N = args.truncation
    f = AdditiveOpSeries(parse_series(args.f, N, Z if args.domain == "Z" else Q))
    g = AdditiveOpSeries(parse_series(args.g, N, Z if args.domain == "Z" else Q))
    h = star_compose(f, g)
    rows = [{"n": i, "f": f.series[i], "g": g.series[i], "f*g": h.series[i]} for i in range(h.order + 1)]
    return _header(args, truncation=N, rows=rows), True


def cmd_gamma_expand(args) -> tuple:
    f = parse_series(args.f, args.truncation, Q if args.domain == "Q" else Z)
    W = args.weight
    if args.multiplicative:
        G = multiplicative_class(f, W)
        return _header(args, weight=W, kind="multiplicative", gamma=G.poly.pretty(), rankUnit=G.rank_unit), True
    G = additive_to_gamma(AdditiveOpSeries(f), W)
    back = gamma_to_additive(G, f.order)
    ok = back.series.truncate(min(W, f.order)) == f.truncate(min(W, f.order))
    return _header(args, weight=W, kind="additive", gamma=G.poly.pretty(), roundTrip=ok), ok


def cmd_sigma(args) -> tuple:
    N = args.truncation
    if args.inverse:
        f = parse_series(args.f, N, Q)
        a = sigma_inverse(f)
        return _header(args, truncation=f.order, sequence=a), True
    a = [scalar_from_str(x.strip()) for x in args.a.split(",") if x.strip()]
    if len(a) > N + 1:
        raise ConfigError("sequence longer than truncation + 1")
    s = sigma(a, N)
    return _header(args, truncation=N, series=s, pretty=repr(s)), True


def cmd_tower_analyze(args) -> tuple:
    A = parse_group(args.group)
    if args.kind == "omega":
        T = TowerDescriptor.omega(A, args.truncation, args.depth)
    else:
        T = TowerDescriptor.factorial(A, args.depth)
    if args.shift:
        T = TowerDescriptor.shifted(args.shift, T)
    rep = analyze_tower(T, seed=args.seed)
    return _header(args, report=rep), rep.consistent


def cmd_omega_lift(args) -> tuple:
    dom = parse_domain(args.domain)
    f = parse_series(args.f, args.truncation, dom)
    if args.depth > 1:
        if dom.kind != "Z":
            raise ConfigError("--depth > 1 is supported over Z")
        res = tower_lift_to_depth(f, args.depth)
        return _header(args, depth=args.depth, result=res), True
    res = omega_lift(f, dom)
    return _header(args, result=res), True


def _projector_checks(N: int, D: int, W: int, ks: Sequence[int]) -> list:
    rows = []
    pis = {n: pi_n(n, N, D) for n in range(-W, W + 1)}
    for n, p in pis.items():
        for m, q in pis.items():
            want = p if n == m else identity(N, D).scale(0)
            rows.append({"check": f"pi_{n} o pi_{m}", "equal": stable_compose(p, q) == want})
    for k in ks:
        psi = psi_stable(k, N, D)
        for n in range(-min(W, 4), min(W, 4) + 1):
            lhs = stable_compose(psi, pis[n])
            rows.append({"check": f"Psi^{k} o pi_{n} = {k}^{n} pi_{n}", "equal": lhs == pis[n].scale(Fraction(k) ** n)})
            lhs = stable_compose(phi(n, k, N, D), psi - identity(N, D).scale(Fraction(k) ** n))
            rows.append({"check": f"phi_{n},{k} o (Psi^{k} - {k}^{n}) = id - pi_{n}",
                         "equal": lhs == identity(N, D) - pis[n]})
    for n, p in pis.items():
        rows.append({"check": f"pi_{n} Omega-compatible", "equal": p.omega_compatible()})
    return rows


def cmd_stable_projectors(args) -> tuple:
    rows = _projector_checks(args.truncation, args.depth, args.window, args.k_set or [2, 3])
    ok = all(r["equal"] for r in rows)
    return _header(args, rows=rows, passed=ok), ok


def cmd_classify_endo(args) -> tuple:
    f = parse_series(args.f, args.truncation, Q)
    res = classify_multiplicative_endo(f)
    return _header(args, result=res), True


def _verify_hrr(args) -> list:
    if args.d is not None:
        ds = [args.d]
    else:
        ds = list(range(0, args.d_max + 1))
    ms = [args.m] if args.m is not None else list(args.m_range)
    return map_cases(_hrr_case, [(d, m) for d in ds for m in ms])


def _verify_arr(args) -> list:
    ds = [args.d] if args.d is not None else list(range(1, args.d_max + 1))
    ms = [args.m] if args.m is not None else list(args.m_range)
    ks = args.k_set or [2, 3, 5]
    return map_cases(_arr_case, [(d, k, m) for d in ds for k in ks for m in ms])


def _verify_grr(args) -> list:
    rng = random.Random(args.seed)
    cases = [(d, e, rng.randrange(2**31)) for d in range(1, args.d_max + 1) for e in range(1, args.d_max + 1)]
    return map_cases(_grr_case, cases)


def _verify_lambda(args) -> list:
    rng = random.Random(args.seed)
    rows = []
    for i in range(args.samples):
        n = rng.randint(1, args.d_max)
        space = BaseSpace((n,))
        x, y = random_split_element(rng, space), random_split_element(rng, space)
        rep = verify_special_axioms(x, y, max_degree=min(4, n) if n > 0 else 1)
        fail = rep.first_failure()
        rows.append({"sample": i, "space": str(space), "checks": len(rep.checks), "equal": rep.passed,
                     "witness": fail.to_json() if fail else None})
    return rows


def _verify_omega_chi(args) -> list:
    rows = []
    ns = [args.n] if args.n else list(range(1, 5))
    for X in (BaseSpace((2,)), BaseSpace((3,)), BaseSpace((1, 1))):
        for n in ns:
            for r in verify_omega_chi(n, X):
                rows.append({"X": str(X), "n": n, "claim": r.claim, "lhs": r.lhs, "rhs": r.rhs, "equal": r.equal})
    return rows


def _verify_adams_eigen(args) -> list:
    rows = [{"check": r["check"], "equal": r["equal"]}
            for r in _projector_checks(args.truncation, args.depth, 4, args.k_set or [2, 3]) if "Psi" in r["check"]]
    rng = random.Random(args.seed)
    for i in range(10):
        space = BaseSpace((rng.randint(1, 3), rng.randint(0, 2)))
        x = random_split_element(rng, space)
        for k in args.k_set or [2, 3]:
            lhs = chern_character(x.adams(k)).poly
            ch = chern_character(x).poly
            rhs = type(ch)(ch.dims, {e: c * k ** sum(e) for e, c in ch.terms.items()})
            rows.append({"check": f"ch(Psi^{k} x) scales degree j by {k}^j (sample {i})", "equal": lhs == rhs})
    return rows


VERIFIERS = {
    "hrr": _verify_hrr,
    "arr": _verify_arr,
    "grr": _verify_grr,
    "lambda-axioms": _verify_lambda,
    "omega-chi": _verify_omega_chi,
    "adams-eigen": _verify_adams_eigen,
}


def cmd_verify(args) -> tuple:
    rows = VERIFIERS[args.what](args)
    failures = [r for r in rows if not r["equal"]]
    return _header(args, cases=len(rows), passed=not failures, failures=failures, rows=rows), not failures


def cmd_suite_all(args) -> tuple:
    rows = []
    for what in VERIFIERS:
        sub = argparse.Namespace(**vars(args))
        sub.what = what
        sub.d = sub.m = sub.n = None
        cases = VERIFIERS[what](sub)
        bad = [r for r in cases if not r["equal"]]
        rows.append({"suite": what, "cases": len(cases), "failures": len(bad), "equal": not bad,
                     "firstFailure": bad[0] if bad else None})
    ok = all(r["equal"] for r in rows)
    return _header(args, passed=ok, rows=rows), ok


# argument parser ------------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, truncation: int = 12):
    p.add_argument("--truncation", type=int, default=truncation)
    p.add_argument("--weight", type=int, default=6)
    p.add_argument("--prime", type=int, default=3)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--d-max", type=int, default=4)
    p.add_argument("--k-set", type=parse_int_list, default=None)
    p.add_argument("--m-range", type=parse_range, default=range(-6, 7))
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="format", action="store_const", const="json")
    g.add_argument("--csv", dest="format", action="store_const", const="csv")
    p.set_defaults(format="table")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lambda-forge", description="Exact lambda-ring and K-theory calculus.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chi-table", help="chi_n in Chern classes")
    p.add_argument("--n", type=int, default=3)
    _common(p)

    p = sub.add_parser("universal-poly", help="P_n or P_{m,n}")
    p.add_argument("--kind", choices=["product", "plethysm"], default="product")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    _common(p)

    p = sub.add_parser("star-compose", help="composition of additive operations")
    p.add_argument("--f", required=True, help="coefficients a0,a1,... or psi:k")
    p.add_argument("--g", required=True)
    p.add_argument("--domain", choices=["Z", "Q"], default="Z")
    _common(p, truncation=8)

    p = sub.add_parser("gamma-expand", help="expand an operation in the gamma-tilde variables")
    p.add_argument("--f", required=True)
    p.add_argument("--multiplicative", action="store_true")
    p.add_argument("--domain", choices=["Z", "Q"], default="Q")
    _common(p, truncation=6)

    p = sub.add_parser("sigma", help="sigma of a sequence, or its inverse")
    p.add_argument("--a", default="1")
    p.add_argument("--f", default=None)
    p.add_argument("--inverse", action="store_true")
    _common(p, truncation=8)

    p = sub.add_parser("tower-analyze", help="lim / R^1 lim of a tower")
    p.add_argument("--kind", choices=["omega", "factorial"], default="omega")
    p.add_argument("--group", default="Z")
    p.add_argument("--shift", type=int, default=0)
    _common(p)

    p = sub.add_parser("omega-lift", help="solve Omega(g) = f")
    p.add_argument("--f", required=True)
    p.add_argument("--domain", default="Z")
    _common(p)
    p.set_defaults(depth=1)

    p = sub.add_parser("stable-projectors", help="Adams eigenprojector identities")
    p.add_argument("--window", type=int, default=8)
    _common(p)
    p.set_defaults(depth=8)

    p = sub.add_parser("classify-endo", help="is f(U)f(V) = f(U+V+UV)?")
    p.add_argument("--f", required=True)
    _common(p)

    p = sub.add_parser("verify", help="verification suites")
    p.add_argument("what", choices=sorted(VERIFIERS))
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--samples", type=int, default=25)
    _common(p)
    p.set_defaults(depth=6)

    p = sub.add_parser("suite-all", help="run every verification suite")
    p.add_argument("--samples", type=int, default=10)
    _common(p)
    p.set_defaults(depth=6, d_max=3)
    return ap


COMMANDS = {
    "chi-table": cmd_chi_table,
    "universal-poly": cmd_universal_poly,
    "star-compose": cmd_star_compose,
    "gamma-expand": cmd_gamma_expand,
    "sigma": cmd_sigma,
    "tower-analyze": cmd_tower_analyze,
    "omega-lift": cmd_omega_lift,
    "stable-projectors": cmd_stable_projectors,
    "classify-endo": cmd_classify_endo,
    "verify": cmd_verify,
    "suite-all": cmd_suite_all,
}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout.buffer
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.truncation < 1:
        parser.print_usage(sys.stderr)
        print("lambda-forge: error: --truncation must be >= 1", file=sys.stderr)
        return 2
    try:
        results, ok = COMMANDS[args.command](args)
        data = emit_report(results, args.format)
    except (ConfigError, ValueError, ArithmeticError) as e:
        parser.print_usage(sys.stderr)
        print(f"lambda-forge: error: {e}", file=sys.stderr)
        return 2
    out.write(data)
    out.flush()
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())
