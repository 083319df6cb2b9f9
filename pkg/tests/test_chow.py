import itertools
import random
from fractions import Fraction

import pytest
import sympy

from lambda_forge.chow import (
    ChowClass,
    RelativeMap,
    chern_character,
    chi_n_class,
    chow_pushforward,
    cotangent_class,
    hilbert_polynomial,
    k_pushforward,
    serre_duality_check,
    tangent_class,
    theta_k,
    todd_class,
    todd_series,
    total_chern,
    verify_arr,
    verify_grr,
    verify_hrr,
    verify_omega_chi,
)
from lambda_forge.lambda_k import BaseSpace, SplitElement, dual, normal_form, random_split_element
from lambda_forge.truncpoly import NilPoly

P1, P2, P3 = BaseSpace((1,)), BaseSpace((2,)), BaseSpace((3,))
P1P1 = BaseSpace((1, 1))
pt = BaseSpace(())


def H(space, coeffs):
    """Chow class on a single projective space from a coefficient list in h."""
    return ChowClass(space, NilPoly(space.dims, {(j,): c for j, c in enumerate(coeffs)}))


def sections(d, m):
    """dim H^0(P^d, O(m)) for m >= 0: monomials of degree m in d+1 variables."""
    return sum(1 for e in itertools.product(range(m + 1), repeat=d + 1) if sum(e) == m)


# Chern classes ------------------------------------------------------------------------


def test_total_chern_examples():
    O1 = SplitElement.line(P2, 1)
    assert total_chern(O1) == H(P2, [1, 1])
    assert total_chern(O1 + O1) == H(P2, [1, 2, 1])
    assert total_chern(-O1) == H(P2, [1, -1, 1])


def test_whitney():
    rng = random.Random(0)
    for space in (P2, P3, P1P1, BaseSpace((2, 1))):
        for _ in range(5):
            x, y = random_split_element(rng, space), random_split_element(rng, space)
            assert total_chern(x + y) == total_chern(x) * total_chern(y)


def test_chern_classes_of_positive_elements_are_elementary_symmetric():
    t = sympy.Symbol("h")
    lines = [2, -1, 1, 3]
    x = sum((SplitElement.line(P3, a) for a in lines), SplitElement.zero(P3))
    expr = sympy.expand(sympy.prod([1 + a * t for a in lines]))
    want = [int(expr.coeff(t, j)) for j in range(4)]
    assert total_chern(x) == H(P3, want)


def test_chi_examples():
    O1 = SplitElement.line(P2, 1)
    assert chi_n_class(2, O1 + O1) == H(P2, [0, 0, 2])
    for n in range(1, 5):
        Pn = BaseSpace((n,))
        assert chi_n_class(n, SplitElement.line(Pn, 1)) == H(Pn, [0] * n + [1])
    rng = random.Random(1)
    for _ in range(5):
        x = random_split_element(rng, P3)
        assert chi_n_class(1, x) == total_chern(x).chern(1)
        assert chi_n_class(0, x) == ChowClass.const(P3, x.rank)


def test_chi_is_additive_and_a_power_sum():
    rng = random.Random(2)
    for _ in range(8):
        x, y = random_split_element(rng, P3), random_split_element(rng, P3)
        for n in range(4):
            assert chi_n_class(n, x + y) == chi_n_class(n, x) + chi_n_class(n, y)
    # chi_n on a line is c_1^n
    L = SplitElement.line(P3, -2)
    for n in range(1, 4):
        assert chi_n_class(n, L) == H(P3, [0] * n + [(-2) ** n])


# ch and td ----------------------------------------------------------------------------


def test_ch_and_td_examples():
    O1 = SplitElement.line(P2, 1)
    assert chern_character(O1) == H(P2, [1, 1, Fraction(1, 2)])
    assert todd_class(SplitElement.const(P2, 3)) == ChowClass.const(P2, 1)
    assert todd_class(O1) == H(P2, [1, Fraction(1, 2), Fraction(1, 12)])


def test_todd_series_against_sympy():
    t = sympy.Symbol("t")
    N = 8
    ser = sympy.series(t / (1 - sympy.exp(-t)), t, 0, N + 1).removeO()
    assert list(todd_series(N).coeffs) == [Fraction(str(ser.coeff(t, j))) for j in range(N + 1)]


def test_ch_is_a_ring_map_with_adams_eigenvalues():
    rng = random.Random(3)
    for _ in range(8):
        x, y = random_split_element(rng, P3), random_split_element(rng, P3)
        assert chern_character(x * y) == chern_character(x) * chern_character(y)
        for k in (-1, 2, 3):
            ch = chern_character(x)
            scaled = sum((ch.degree_part(j) * Fraction(k) ** j for j in range(4)), ChowClass.const(P3, 0))
            assert chern_character(x.adams(k)) == scaled


def test_tangent_examples():
    f1 = RelativeMap.to_point(P1)
    T = tangent_class(f1)
    assert T == SplitElement(P1, {(1,): 2, (0,): -1})
    assert total_chern(T).chern(1) == H(P1, [0, 2])
    td = todd_class(tangent_class(RelativeMap.to_point(P2)))
    assert td == H(P2, [1, Fraction(3, 2), 1])
    for space in (P1, P2, P1P1):
        f = RelativeMap.to_point(space)
        assert dual(tangent_class(f)) == cotangent_class(f)


# pushforwards ------------------------------------------------------------------------------


def test_k_pushforward_examples():
    f = RelativeMap.to_point(P2)
    assert k_pushforward(f, SplitElement.line(P2, 1)) == SplitElement.const(pt, 3)
    for d in range(1, 6):
        g = RelativeMap.to_point(BaseSpace((d,)))
        assert k_pushforward(g, SplitElement.line(BaseSpace((d,)), -1)) == SplitElement.zero(pt)
        assert k_pushforward(g, SplitElement.line(BaseSpace((d,)), -d - 1)) == SplitElement.const(pt, (-1) ** d)


@pytest.mark.parametrize("d", range(0, 5))
def test_hilbert_polynomial_counts_sections(d):
    for m in range(0, 7):
        assert hilbert_polynomial(d, m) == sections(d, m)
    for m in range(-10, 11):
        assert serre_duality_check(d, m)


def test_chow_pushforward_examples():
    f = RelativeMap.to_point(P2)
    assert chow_pushforward(f, H(P2, [0, 0, 1])) == ChowClass.const(pt, 1)
    assert chow_pushforward(f, H(P2, [0, 1])) == ChowClass.const(pt, 0)
    g = RelativeMap.forget_last(P1P1)
    h1h2 = ChowClass(P1P1, NilPoly((1, 1), {(1, 1): 1}))
    assert chow_pushforward(g, h1h2) == ChowClass.h(P1)


def test_projection_formula():
    rng = random.Random(4)
    src = BaseSpace((2, 2))
    f = RelativeMap.forget_last(src)
    for _ in range(6):
        x = random_split_element(rng, src)
        y = random_split_element(rng, P2)
        assert k_pushforward(f, x * y.pullback(2)) == k_pushforward(f, x) * y
        cx, cy = chern_character(x), chern_character(y)
        assert chow_pushforward(f, cx * cy.pullback(2)) == chow_pushforward(f, cx) * cy


def test_pushforward_space_checks():
    with pytest.raises(ValueError):
        k_pushforward(RelativeMap.to_point(P2), SplitElement.line(P3, 1))


# Bott classes and Riemann-Roch ----------------------------------------------------------------


def test_theta_examples():
    assert normal_form(theta_k(SplitElement.line(P1, -2), 2)).pretty() == "2 - 2*u"
    for k in (2, 3, 5):
        assert theta_k(SplitElement.const(P2, 1), k) == SplitElement.const(P2, k)
    omega = cotangent_class(RelativeMap.to_point(P1))
    inv = theta_k(-omega, 2)
    assert normal_form(inv) == NilPoly((1,), {(0,): Fraction(1, 2), (1,): Fraction(1, 2)})
    with pytest.raises(ValueError):
        theta_k(SplitElement.const(P1, 1), 1)


def test_theta_is_multiplicative():
    rng = random.Random(5)
    for _ in range(6):
        x = random_split_element(rng, P2, coeff_range=(1, 2), allow_virtual=False)
        y = random_split_element(rng, P2, coeff_range=(1, 2), allow_virtual=False)
        assert theta_k(x + y, 3) == theta_k(x, 3) * theta_k(y, 3)
        assert theta_k(x - y, 3) * theta_k(y, 3) == theta_k(x, 3)


def test_arr_examples():
    f = RelativeMap.to_point(P1)
    rep = verify_arr(f, 2, SplitElement.line(P1, 1))
    assert rep.equal and rep.lhs == SplitElement.const(pt, 2)
    assert set(rep.trace) >= {"f_*x", "Psi^k x", "theta^k(Omega_f)^-1", "integrand"}
    assert verify_arr(f, 2, SplitElement.zero(P1)).equal
    for m in range(-5, 6):
        assert verify_arr(RelativeMap.to_point(P2), 3, SplitElement.line(P2, m)).equal


def test_arr_relative_and_on_random_elements():
    rng = random.Random(6)
    f = RelativeMap.forget_last(BaseSpace((1, 2)))
    for _ in range(4):
        x = random_split_element(rng, f.source)
        for k in (2, 3):
            assert verify_arr(f, k, x).equal


def test_hrr_examples():
    r = verify_hrr(1, 1)
    assert r.equal and r.lhs == 2
    r = verify_hrr(2, 0)
    assert r.equal and r.lhs == 1


def test_grr_examples():
    f = RelativeMap.forget_last(P1P1)
    assert verify_grr(f, SplitElement.line(P1P1, 2, 3)).equal
    rng = random.Random(7)
    g = RelativeMap.forget_last(BaseSpace((2, 3)))
    for _ in range(3):
        assert verify_grr(g, random_split_element(rng, g.source)).equal
    assert verify_grr(RelativeMap.to_point(P3), SplitElement.line(P3, -4)).equal


def test_corrupted_grr_fails():
    # dropping the Todd class breaks the identity on P^1
    f = RelativeMap.to_point(P1)
    x = SplitElement.line(P1, 1)
    lhs = chern_character(k_pushforward(f, x))
    assert lhs != chow_pushforward(f, chern_character(x))


def test_omega_chi_examples():
    reps = verify_omega_chi(2, P2)
    assert len(reps) == 1 and reps[0].equal
    XP1 = BaseSpace((2, 1))
    assert reps[0].rhs == ChowClass(XP1, NilPoly(XP1.dims, {(1, 1): 2}))
    assert all(r.equal for r in verify_omega_chi(1, P2))
    assert all(r.equal for r in verify_omega_chi(3, P3))
    assert all(r.equal for r in verify_omega_chi(2, P1P1))


def test_report_json():
    js = verify_hrr(3, -2).to_json()
    assert js["equal"] is True and js["lhs"] == js["rhs"] == "0"
