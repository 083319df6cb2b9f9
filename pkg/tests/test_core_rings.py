import math
import warnings
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from lambda_forge.scalars import Q, Z, DomainError, ScalarDomain
from lambda_forge.series import (
    OrderMismatchWarning,
    TruncSeries,
    from_binomial_basis,
    log_power_basis,
    series_exp,
    series_invert,
    series_log1p,
    series_mul,
    to_binomial_basis,
)

U = sympy.Symbol("U")


def sympy_coeffs(expr, N):
    s = sympy.series(expr, U, 0, N + 1).removeO()
    return [Fraction(str(s.coeff(U, i))) for i in range(N + 1)]


def S(coeffs, N=None, dom=Q):
    return TruncSeries.from_coeffs(coeffs, N, dom)


# scalar domains -------------------------------------------------------------------


def test_mod_needs_modulus_at_least_two():
    with pytest.raises(ValueError):
        ScalarDomain.mod(1)


def test_localized_division_rules():
    d = ScalarDomain.localized(2)
    assert d.div(3, 4) == Fraction(3, 4)
    with pytest.raises(DomainError):
        d.div(1, 3)
    with pytest.raises(DomainError):
        Z.div(1, 2)
    assert Z.div(6, 3) == 2


def test_mod_arithmetic_wraps():
    d = ScalarDomain.mod(6)
    assert d.add(4, 5) == 3
    assert d.is_unit(5) and not d.is_unit(4)
    assert d.mul(d.inv(5), 5) == 1


# multiplication and inversion -------------------------------------------------------


def test_mul_examples():
    assert series_mul(S([1, 1], 2), S([1, 1], 2)).coeffs == (1, 2, 1)
    geo = S([1] * 8)
    assert (S([1, -1], 7) * geo).coeffs == (1,) + (0,) * 7
    f = TruncSeries.one_plus_u_power(2, 5, Z) * TruncSeries.one_plus_u_power(3, 5, Z)
    assert list(f.coeffs) == [math.comb(5, j) for j in range(6)]


def test_mixed_order_truncates_with_warning():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        h = S([1, 1], 5) * S([1, 1], 2)
    assert h.order == 2
    assert any(issubclass(x.category, OrderMismatchWarning) for x in w)


def test_domain_mismatch_is_an_error():
    with pytest.raises(DomainError):
        series_mul(S([1, 1], 2, Z), S([1, 1], 2, Q))


def test_invert_examples():
    assert series_invert(S([1, 1], 3)).coeffs == (1, -1, 1, -1)
    z2 = ScalarDomain.invert_integer(2)
    inv = series_invert(S([2, -2], 2, z2))
    assert inv.coeffs == (Fraction(1, 2),) * 3
    with pytest.raises(DomainError):
        series_invert(S([2, -2], 2, Z))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=12), st.sampled_from([1, -1, 3]))
def test_invert_multiplies_back(tail, a0):
    f = S([a0] + tail, dom=Q)
    one = f * series_invert(f)
    assert one == TruncSeries.constant(1, f.order, Q)


# exp / log -----------------------------------------------------------------------------


def test_log1p_examples():
    assert series_log1p(S([1, 1], 3)).coeffs == (0, 1, Fraction(-1, 2), Fraction(1, 3))
    assert series_exp(series_log1p(S([1, 1], 10))) == S([1, 1], 10)
    p2 = (series_log1p(S([1, 1], 4)) ** 2).scale(Fraction(1, 2))
    assert list(p2.coeffs) == [0, 0, Fraction(1, 2), Fraction(-1, 2), Fraction(11, 24)]


def test_log_basis_against_sympy():
    N = 9
    basis = log_power_basis(N)
    for n in range(N + 1):
        assert list(basis[n].coeffs) == sympy_coeffs(sympy.log(1 + U) ** n / sympy.factorial(n), N)


def test_exp_rejects_constant_term():
    with pytest.raises(ValueError):
        series_exp(S([1, 1], 3))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=7), min_size=1, max_size=20))
def test_exp_log_round_trip(tail):
    g = S([0] + tail)
    assert series_log1p(series_exp(g)) == g
    f = S([1] + tail)
    assert series_exp(series_log1p(f)) == f


def test_exp_against_sympy():
    g = S([0, 1, -2, Fraction(1, 3)], 8)
    assert list(series_exp(g).coeffs) == sympy_coeffs(sympy.exp(U - 2 * U**2 + U**3 / 3), 8)


# binomial basis ----------------------------------------------------------------------------


def test_binomial_examples():
    assert to_binomial_basis(S([0, 1], 3, Z))[:3] == (-1, 1, 0)
    assert to_binomial_basis(TruncSeries.one_plus_u_power(5, 5, Z)) == (0, 0, 0, 0, 0, 1)
    assert to_binomial_basis(S([0, 0, 1], 2, Z)) == (1, -2, 1)
    assert from_binomial_basis({6: 1}, 2, Z).coeffs == (1, 6, 15)
    assert from_binomial_basis({0: 1}, 4, Z) == TruncSeries.constant(1, 4, Z)
    assert from_binomial_basis({-1: 1}, 4, Z, allow_negative=True).coeffs == (1, -1, 1, -1, 1)
    with pytest.raises(ValueError):
        from_binomial_basis({-1: 1}, 4, Z)


@pytest.mark.parametrize("N", [0, 1, 5, 17, 64])
def test_binomial_round_trips(N):
    import random

    rng = random.Random(N)
    f = S([rng.randint(-20, 20) for _ in range(N + 1)], N, Z)
    assert from_binomial_basis(to_binomial_basis(f), N, Z) == f
    alpha = tuple(rng.randint(-5, 5) for _ in range(N + 1))
    assert to_binomial_basis(from_binomial_basis(alpha, N, Z)) == alpha


def test_binomial_expansion_oracle():
    # sum_j alpha_j (1+U)^j computed directly with sympy
    alpha = {0: 2, 3: -1, 7: 4}
    expr = sum(a * (1 + U) ** j for j, a in alpha.items())
    assert list(from_binomial_basis(alpha, 5, Q).coeffs) == sympy_coeffs(sympy.expand(expr), 5)


# ring axioms -------------------------------------------------------------------------------

coef = st.integers(-6, 6)


@settings(max_examples=30, deadline=None)
@given(st.lists(coef, min_size=6, max_size=6), st.lists(coef, min_size=6, max_size=6),
       st.lists(coef, min_size=6, max_size=6))
def test_series_ring_axioms(a, b, c):
    f, g, h = S(a, dom=Z), S(b, dom=Z), S(c, dom=Z)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f


def test_json_round_trip():
    f = S([1, Fraction(-2, 3), 0, 5], 3)
    assert f.to_json() == ["1", "-2/3", "0", "5"]
    assert TruncSeries.from_json(f.to_json(), Q) == f
