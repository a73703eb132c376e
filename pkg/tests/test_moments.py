import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chui_lab.errors import DomainError
from chui_lab.fractions import PoleConfiguration
from chui_lab.moments import (UnimodularFamily, adversarial_families, annulus_energy, fejer_cosine_sum,
                              fejer_kernel, fejer_weighted_bound, moment_lower_bound_check, power_sums,
                              random_trials)

angle_lists = st.lists(st.floats(0, 2 * math.pi, allow_nan=False), min_size=1, max_size=20)


def test_power_sums_of_roots_of_unity():
    N = 5
    S = power_sums(UnimodularFamily.roots_of_unity(N), 12)
    expect = np.where(np.arange(1, 13) % N == 0, N, 0)
    assert np.allclose(S, expect, atol=1e-12)


@given(angle_lists, st.integers(1, 40))
def test_power_sums_match_direct_exponentials(a, J):
    b = UnimodularFamily(np.array(a))
    direct = np.exp(1j * np.outer(np.arange(1, J + 1), b.angles)).sum(axis=1)
    assert np.allclose(power_sums(b, J), direct, atol=1e-11)


def test_family_is_read_only_and_nonempty():
    b = UnimodularFamily.roots_of_unity(3)
    with pytest.raises(ValueError):
        b.angles[0] = 1.0
    with pytest.raises(DomainError):
        UnimodularFamily(np.array([]))


def test_fejer_kernel_values():
    assert fejer_kernel(5, 0.0) == pytest.approx(5.0)
    assert fejer_kernel(5, 2 * math.pi) == pytest.approx(5.0)
    assert fejer_kernel(4, math.pi) == pytest.approx(0.0, abs=1e-15)
    x = np.linspace(-7, 7, 301)
    for j in (1, 2, 9, 40):
        assert np.allclose(fejer_kernel(j, x), fejer_cosine_sum(j, x), atol=1e-11)


@given(st.integers(1, 200), st.floats(-50, 50, allow_nan=False))
def test_fejer_kernel_is_nonnegative(j, x):
    assert fejer_kernel(j, x) >= 0.0
    assert fejer_cosine_sum(j, x) >= -1e-10 * j


@given(angle_lists, st.integers(1, 30))
def test_weighted_sum_equals_fejer_double_sum(a, M):
    b = UnimodularFamily(np.array(a))
    weighted, floor = fejer_weighted_bound(b, M)
    d = np.subtract.outer(b.angles, b.angles)
    double = float(np.sum(fejer_cosine_sum(M + 1, d)))
    assert 2 * weighted + b.N ** 2 == pytest.approx(double, rel=1e-9, abs=1e-9)
    assert floor == b.N * (M - b.N + 1) / 2


@given(angle_lists)
def test_fejer_bound_holds_for_M_at_least_N(a):
    b = UnimodularFamily(np.array(a))
    for M in (b.N, 2 * b.N, 3 * b.N + 1):
        weighted, floor = fejer_weighted_bound(b, M)
        assert weighted >= floor * (1 - 1e-12) - 1e-12


@given(angle_lists)
def test_moment_lower_bound_holds(a):
    assert moment_lower_bound_check(UnimodularFamily(np.array(a))).passed


def test_moment_sum_for_roots_of_unity_is_two_N_squared():
    for N in (1, 3, 10):
        m = moment_lower_bound_check(UnimodularFamily.roots_of_unity(N))
        assert m.value == pytest.approx(2 * N * N)
        assert m.floor == N * N / 2


def test_single_number_weighted_bound():
    # N = 1, M = 2: (1 - 1/3) + (1 - 2/3) = 1, floor 1 (2 - 1 + 1)/2 = 1
    assert fejer_weighted_bound(UnimodularFamily(np.array([0.3])), 2) == pytest.approx((1.0, 1.0))


def test_adversarial_families_pass():
    rng = np.random.default_rng(0)
    for N in (2, 7, 32):
        for b in adversarial_families(N, rng):
            assert b.N == N
            assert moment_lower_bound_check(b).passed
            w, fl = fejer_weighted_bound(b, 2 * N)
            assert w >= fl


def test_random_trials_summary():
    s = random_trials(12, trials=50, seed=5)
    assert s.moment_all_pass and s.fejer_all_pass and s.adversarial_pass
    assert s.min_moment_ratio >= 0.5
    assert random_trials(12, trials=50, seed=5) == s


@pytest.mark.parametrize("N", [2, 3, 8, 32])
def test_annulus_energy_of_equispaced_poles(N):
    t1, t2 = 1 - 2 / N, 1 - 1 / N
    exact = N * (math.log1p(-t1 ** N) - math.log1p(-t2 ** N))
    e = annulus_energy(PoleConfiguration.equispaced(N))
    assert e.value == pytest.approx(exact, rel=1e-10)
    assert e.taylor_proxy == pytest.approx(exact, rel=1e-10)
    assert e.per_pole == pytest.approx(e.value / N)


def test_annulus_energy_random_poles_agree():
    c = PoleConfiguration.random(16, np.random.default_rng(2))
    e = annulus_energy(c)
    assert e.relative_difference < 1e-9
    with pytest.raises(DomainError):
        annulus_energy(PoleConfiguration([0.0]))


@pytest.mark.parametrize("Mplus1", [2, 5, 17, 101])
def test_fejer_on_dense_grid(Mplus1):
    x = np.linspace(-math.pi, math.pi, 10_000)
    closed = fejer_kernel(Mplus1, x)
    assert np.min(closed) >= 0
    assert np.max(np.abs(closed - fejer_cosine_sum(Mplus1, x))) < 1e-10
