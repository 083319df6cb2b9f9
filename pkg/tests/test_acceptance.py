"""The thirteen acceptance criteria, each exact and under its time limit.

Run alone with ``pytest tests/test_acceptance.py -v``; the summary at the end
prints one PASS/FAIL line per criterion.
"""

import itertools
import math
import random
from fractions import Fraction

from lambda_forge.chow import RelativeMap, verify_arr, verify_grr, verify_hrr, verify_omega_chi
from lambda_forge.lambda_k import (
    BaseSpace,
    SplitElement,
    adams_op,
    lambda_op,
    random_split_element,
    verify_special_axioms,
)
from lambda_forge.operations import (
    AdditiveOpSeries,
    additive_to_gamma,
    apply_operation,
    classify_multiplicative_endo,
    gamma_to_additive,
    star_compose,
)
from lambda_forge.scalars import Q, Z, ScalarDomain
from lambda_forge.series import TruncSeries
from lambda_forge.stable import (
    StableElement,
    chi_interval,
    identity,
    phi,
    pi_n,
    psi_stable,
    shift,
    sigma,
    stable_compose,
)
from lambda_forge.symmetric import chi_poly, universal_plethysm_poly, universal_product_poly
from lambda_forge.towers import (
    GroupDescriptor,
    TowerDescriptor,
    analyze_tower,
    factorial_limit_elements,
    fp_canonical_lift,
    fp_lifts_in_L,
    fp_membership_L,
    omega_apply,
    omega_lift,
    random_L_member,
    tower_lift_to_depth,
)

SEED = 20240601


def esym(values, k):
    return sum(math.prod(c) for c in itertools.combinations(values, k)) if k else 1


def ev(poly, values):
    return poly.evaluate({n: values.get(n, 0) for n in poly.names})


def test_ac01_chi_table(criterion):
    def body():
        assert chi_poly(1).pretty() == "c1"
        assert chi_poly(2).pretty() == "-2*c2 + c1^2"
        assert chi_poly(3).pretty() == "3*c3 - 3*c1*c2 + c1^3"
        rng = random.Random(SEED)
        for n in (1, 2, 3):
            for _ in range(5):
                roots = [rng.randint(-5, 5) for _ in range(4)]
                vals = {f"c{j}": esym(roots, j) for j in range(1, 4)}
                assert ev(chi_poly(n), vals) == sum(r**n for r in roots)

    criterion(1, "chi_1..chi_3 in Chern classes", 1, body)


def test_ac02_star_ring(criterion):
    def body():
        N, M = 32, 16
        rng = random.Random(SEED)
        one = AdditiveOpSeries.psi(1, N)
        ks = [k for k in range(-3, 6) if k]
        for a in ks:
            for b in ks:
                assert star_compose(AdditiveOpSeries.psi(a, N), AdditiveOpSeries.psi(b, N)) == AdditiveOpSeries.psi(a * b, N)

        def rand():
            return AdditiveOpSeries.from_coeffs([rng.randint(-4, 4) for _ in range(N + 1)], N)

        for _ in range(50):
            f, g, h = rand(), rand(), rand()
            fg = star_compose(f, g)
            assert star_compose(fg, h) == star_compose(f, star_compose(g, h))
            assert star_compose(f + g, h) == star_compose(f, h) + star_compose(g, h)
            assert star_compose(f, g + h) == star_compose(f, g) + star_compose(f, h)
            assert star_compose(f, one) == f and star_compose(one, f) == f
            assert fg.truncate(M) == star_compose(f.truncate(M), g.truncate(M))

    criterion(2, "star: associative, bi-additive, unital, Psi^a*Psi^b = Psi^ab, N=32 -> 16", 10, body)


def test_ac03_sigma(criterion):
    def body():
        N = 24
        for k in [k for k in range(-4, 5) if k]:
            assert sigma([Fraction(k) ** n for n in range(N + 1)], N) == TruncSeries.one_plus_u_power(k, N, Q)
        rng = random.Random(SEED)

        def seq(n):
            return [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)]

        for _ in range(30):
            n = rng.randint(2, 16)
            a, b = seq(n + 1), seq(n + 1)
            lhs = sigma([x * y for x, y in zip(a, b)], n)
            rhs = star_compose(AdditiveOpSeries(sigma(a, n)), AdditiveOpSeries(sigma(b, n))).series
            assert lhs == rhs
        for _ in range(10):
            a = seq(N + 2)
            assert sigma(shift(a), N - 1) == omega_apply(sigma(a, N))

    criterion(3, "sigma((k^n)) = (1+U)^k, sigma(ab) = sigma(a)*sigma(b), sigma s = Omega sigma", 10, body)


def test_ac04_eigenprojectors(criterion):
    def body():
        N, D, W = 12, 8, 8
        pis = {n: pi_n(n, N, D) for n in range(-W, W + 1)}
        zero = identity(N, D).scale(0)
        for n, p in pis.items():
            assert p.omega_compatible()
            for m, q in pis.items():
                assert stable_compose(p, q) == (p if n == m else zero)
        x = StableElement.from_window({-8: 3, -5: Fraction(1, 2), 0: -1, 7: 4}, N, D)
        total = zero
        for p in pis.values():
            total = total + stable_compose(p, x)
        assert total == x == stable_compose(chi_interval(W, N, D), x)
        for k in (2, 3):
            psi = psi_stable(k, N, D)
            for n in range(-4, 5):
                assert stable_compose(psi, pis[n]) == pis[n].scale(Fraction(k) ** n)
                assert stable_compose(pis[n], psi) == pis[n].scale(Fraction(k) ** n)
                lhs = stable_compose(phi(n, k, N, D), psi - identity(N, D).scale(Fraction(k) ** n))
                assert lhs == identity(N, D) - pis[n]

    criterion(4, "pi_n orthogonal idempotents on [-8,8], Psi^k pi_n = k^n pi_n, phi_{n,k}", 5, body)


def test_ac05_towers(criterion):
    def body():
        rng = random.Random(SEED)
        for p in (2, 3, 5):
            N = 4 * p
            d = ScalarDomain.mod(p)
            for i in range(100):
                if i % 2:
                    f = random_L_member(rng, p, N)
                else:
                    f = TruncSeries(d, tuple(rng.randrange(p) for _ in range(N + 1)))
                res = omega_lift(f)
                assert fp_membership_L(f) == res.ok
                if res.ok:
                    assert omega_apply(res.lift) == f
            for _ in range(5):
                f = random_L_member(rng, p, N)
                g = fp_canonical_lift(f)
                assert fp_membership_L(g) and omega_apply(g) == f.truncate(g.order - 1)
                assert fp_lifts_in_L(f) == [g]
        for f in (TruncSeries.from_coeffs([1, 1], 24, Z), TruncSeries.one_plus_u_power(-1, 24, Z)):
            res = tower_lift_to_depth(f, 20)
            assert res.ok and res.depth_reached == 20 and res.chain[0] == f
            for lower, upper in zip(res.chain, res.chain[1:]):
                assert omega_apply(upper) == lower.truncate(upper.order - 1)
        bad = tower_lift_to_depth(TruncSeries.from_coeffs([0, 1], 24, Z), 1)
        assert not bad.ok and bad.obstruction_depth == 1
        assert factorial_limit_elements(12, math.factorial(12) - 1) == [(0,) * 13]
        rep = analyze_tower(TowerDescriptor.factorial(GroupDescriptor.integers(1), depth=12))
        assert rep.lim.is_zero and rep.mittag_leffler == "no" and rep.consistent
        assert rep.r1lim.tag == "HatZModZ"

    criterion(5, "F_p lemma (p=2,3,5), Z-tower lifts to depth 20, Z! lim = 0 and not ML", 10, body)


def test_ac06_lambda_axioms(criterion):
    def body():
        rng = random.Random(SEED)
        for i in range(25):
            space = BaseSpace((i % 5 + 1,))
            x, y = random_split_element(rng, space), random_split_element(rng, space)
            rep = verify_special_axioms(x, y, max_degree=4)
            names = {c.name for c in rep.checks}
            assert "lambda^n(xy) = P_n" in names and "lambda^m(lambda^n x) = P_{m,n}" in names
            assert rep.passed, rep.first_failure()
        for n in range(1, 5):
            for _ in range(3):
                xs = [rng.randint(-2, 2) for _ in range(n + 1)]
                ys = [rng.randint(-2, 2) for _ in range(n)]
                vals = {**{f"e{j}": esym(xs, j) for j in range(1, n + 1)}, **{f"f{j}": esym(ys, j) for j in range(1, n + 1)}}
                assert ev(universal_product_poly(n), vals) == esym([a * b for a in xs for b in ys], n)
        for m in range(1, 9):
            for n in range(1, 9):
                if m * n > 8:
                    continue
                xs = [rng.randint(-2, 2) for _ in range(m * n)]
                prods = [math.prod(c) for c in itertools.combinations(xs, n)]
                vals = {f"e{j}": esym(xs, j) for j in range(1, m * n + 1)}
                assert ev(universal_plethysm_poly(m, n), vals) == esym(prods, m)

    criterion(6, "special lambda-ring axioms on 25 pairs, P_n and P_{m,n} by brute-force roots", 30, body)


def test_ac07_square_identity(criterion):
    def body():
        rng = random.Random(SEED)
        for i in range(25):
            space = BaseSpace((i % 5 + 1,))
            x = random_split_element(rng, space)
            assert x * x == adams_op(2, x) + lambda_op(2, x).scale(2)

    criterion(7, "x^2 = Psi^2 x + 2 lambda^2 x on 25 elements", 2, body)


def test_ac08_hrr(criterion):
    def body():
        cases = [(d, m) for d in range(1, 7) for m in range(-10, 11)]
        assert len(cases) == 126
        for d, m in cases:
            r = verify_hrr(d, m)
            assert r.equal and r.lhs == math.prod(range(m + 1, m + d + 1)) // math.factorial(d), (d, m)

    criterion(8, "HRR on P^d, d <= 6, m in [-10,10] (126 cases)", 5, body)


def test_ac09_arr(criterion):
    def body():
        n = 0
        for d in range(1, 5):
            space = BaseSpace((d,))
            f = RelativeMap.to_point(space)
            for k in (2, 3, 5):
                for m in range(-6, 7):
                    assert verify_arr(f, k, SplitElement.line(space, m)).equal, (d, k, m)
                    n += 1
        assert n == 156

    criterion(9, "ARR over Z[1/k], d <= 4, k in {2,3,5}, m in [-6,6]", 10, body)


def test_ac10_grr(criterion):
    def body():
        rng = random.Random(SEED)
        for d in range(1, 4):
            for e in range(1, 4):
                space = BaseSpace((e, d))
                f = RelativeMap.forget_last(space)
                for _ in range(2):
                    assert verify_grr(f, random_split_element(rng, space)).equal, (d, e)

    criterion(10, "GRR for P^d x P^e -> P^e, d, e <= 3", 10, body)


def test_ac11_omega_chi(criterion):
    def body():
        for X in (BaseSpace((2,)), BaseSpace((3,)), BaseSpace((1, 1))):
            for n in range(1, 5):
                assert all(r.equal for r in verify_omega_chi(n, X)), (X, n)

    criterion(11, "Omega(chi_n) = n chi_{n-1} on X x P^1, n <= 4", 5, body)


def test_ac12_endomorphisms(criterion):
    def body():
        N = 12
        for k in range(-5, 6):
            res = classify_multiplicative_endo(TruncSeries.one_plus_u_power(k, N, Z))
            assert res.is_psi and res.exponent == k
        rng = random.Random(SEED)
        for _ in range(10):
            k = rng.randint(-5, 5)
            pos = rng.randint(2, N)
            bump = TruncSeries.monomial(pos, N, Z).scale(rng.choice([-2, -1, 1, 2]))
            res = classify_multiplicative_endo(TruncSeries.one_plus_u_power(k, N, Z) + bump)
            assert not res.is_psi and res.witness and res.witness["lhs"] != res.witness["rhs"]

    criterion(12, "classify f(U)f(V) = f(U+V+UV): recovers k in [-5,5], rejects 10 perturbations", 2, body)


def test_ac13_gamma_round_trip(criterion):
    def body():
        W = N = 10
        rng = random.Random(SEED)
        for _ in range(20):
            f = AdditiveOpSeries.from_coeffs([0] + [rng.randint(-5, 5) for _ in range(N)], N)
            assert gamma_to_additive(additive_to_gamma(f, W), N) == f
        for n in (1, 2, 3, 4):
            space = BaseSpace((n,))
            for _ in range(3):
                f = AdditiveOpSeries.from_coeffs([0] + [rng.randint(-3, 3) for _ in range(n)], n)
                x = random_split_element(rng, space)
                assert apply_operation(f, x) == apply_operation(additive_to_gamma(f, n), x)

    criterion(13, "additive <-> gamma-tilde round trip at W = N = 10, both routes agree", 5, body)


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q"]))
