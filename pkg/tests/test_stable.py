import random
from fractions import Fraction

import pytest

from lambda_forge.operations import AdditiveOpSeries, star_compose
from lambda_forge.scalars import Q
from lambda_forge.series import TruncSeries
from lambda_forge.stable import (
    StableElement,
    chi_interval,
    identity,
    levelwise_star,
    p_basis,
    phi,
    pi_n,
    psi_stable,
    shift,
    sigma,
    sigma_inverse,
    stable_compose,
)
from lambda_forge.towers import omega_apply, omega_power


def rand_seq(rng, n, lo=-5, hi=5):
    return [Fraction(rng.randint(lo, hi), rng.randint(1, 3)) for _ in range(n)]


def oracle_sigma_inverse(f):
    """a_n = (Omega^n f)(0), since Omega p_n = p_(n-1) and p_n(0) = [n = 0]."""
    return [omega_power(f, n)[0] for n in range(f.order + 1)]


# sigma ----------------------------------------------------------------------------------


def test_sigma_examples():
    N = 8
    assert sigma([2**n for n in range(N + 1)], N) == TruncSeries.one_plus_u_power(2, N, Q)
    assert sigma([0] * 5, N) == TruncSeries.zero(N, Q)
    assert sigma([1], N) == TruncSeries.constant(1, N, Q)


def test_sigma_inverse_examples():
    N = 9
    assert sigma_inverse(TruncSeries.one_plus_u_power(3, N, Q)) == [3**n for n in range(N + 1)]
    assert sigma_inverse(p_basis(5, N)) == [int(n == 5) for n in range(N + 1)]
    U = TruncSeries.monomial(1, N, Q)
    a = sigma_inverse(U)
    assert a == oracle_sigma_inverse(U)
    assert sigma(a, N) == U
    # U = exp(log(1+U)) - 1, so every p-coordinate beyond 0 is 1
    assert a == [0] + [1] * N


@pytest.mark.parametrize("N", [3, 10, 24])
def test_sigma_inverse_against_omega_oracle(N):
    rng = random.Random(N)
    for _ in range(5):
        f = TruncSeries.from_coeffs(rand_seq(rng, N + 1), N, Q)
        assert sigma_inverse(f) == oracle_sigma_inverse(f)
        assert sigma(sigma_inverse(f), N) == f


@pytest.mark.parametrize("N", [4, 12, 24])
def test_sigma_intertwines_shift_and_omega(N):
    rng = random.Random(N + 1)
    for _ in range(5):
        a = rand_seq(rng, N + 2)
        assert sigma(shift(a), N - 1) == omega_apply(sigma(a, N))


@pytest.mark.parametrize("N", [2, 8, 16])
def test_sigma_is_a_ring_map(N):
    rng = random.Random(N + 2)
    for _ in range(30 if N <= 8 else 10):
        a, b = rand_seq(rng, N + 1), rand_seq(rng, N + 1)
        prod = [x * y for x, y in zip(a, b)]
        lhs = sigma(prod, N)
        rhs = star_compose(AdditiveOpSeries(sigma(a, N)), AdditiveOpSeries(sigma(b, N))).series
        assert lhs == rhs


# stable elements ----------------------------------------------------------------------------


N, D = 10, 4


def test_pi_levels():
    p0 = pi_n(0, N, D)
    assert p0.level(0) == TruncSeries.constant(1, N, Q)
    assert p0.level(1) == p_basis(1, N)
    assert pi_n(-2, N, D).level(3) == p_basis(1, N)


def test_psi_stable_levels():
    s = psi_stable(2, N, D)
    assert s.level(1) == TruncSeries.one_plus_u_power(2, N, Q).scale(Fraction(1, 2))
    assert s.level(0) == TruncSeries.one_plus_u_power(2, N, Q)
    with pytest.raises(ValueError):
        psi_stable(0, N, D)


def test_chi_interval_is_a_sum_of_projectors():
    assert chi_interval(1, N, D) == pi_n(-1, N, D) + pi_n(0, N, D) + pi_n(1, N, D)


@pytest.mark.parametrize("make", [
    lambda: identity(N, D),
    lambda: pi_n(2, N, D),
    lambda: pi_n(-3, N, D),
    lambda: chi_interval(2, N, D),
    lambda: psi_stable(3, N, D),
    lambda: psi_stable(-2, N, D),
    lambda: phi(1, 2, N, D),
    lambda: StableElement.from_window({-2: 5, 0: Fraction(1, 3), 4: -1}, N, D),
])
def test_every_constructor_is_omega_compatible(make):
    assert make().omega_compatible()


def test_projector_algebra():
    W = 3
    ps = {n: pi_n(n, N, D) for n in range(-W, W + 1)}
    zero = StableElement.from_window({}, N, D)
    for n in ps:
        assert stable_compose(ps[n], ps[n]) == ps[n]
        for m in ps:
            if m != n:
                assert stable_compose(ps[n], ps[m]) == zero
    x = StableElement.from_window({-3: 2, -1: Fraction(-1, 2), 2: 7}, N, D)
    total = zero
    for n in ps:
        total = total + stable_compose(ps[n], x)
    assert total == x
    assert stable_compose(chi_interval(W, N, D), x) == x


def test_adams_eigen_relations():
    k = 3
    for n in range(-2, 3):
        p = pi_n(n, N, D)
        assert stable_compose(psi_stable(k, N, D), p) == p.scale(Fraction(k) ** n)
        lhs = stable_compose(phi(n, k, N, D), psi_stable(k, N, D) - identity(N, D).scale(Fraction(k) ** n))
        assert lhs == identity(N, D) - p


def test_pointwise_composition_matches_levelwise_star():
    x = psi_stable(2, N, D) + pi_n(1, N, D)
    y = StableElement.from_window({-1: 3, 0: 1, 2: Fraction(1, 2)}, N, D)
    z = stable_compose(x, y)
    assert levelwise_star(x, y) == z.levels()


def test_window_bounds():
    with pytest.raises(ValueError):
        StableElement.from_window({N + 1: 1}, N, D)
    with pytest.raises(ValueError):
        pi_n(0, N, D).level(D + 1)
