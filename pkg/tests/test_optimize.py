import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chui_lab.errors import ConvergenceError, DomainError
from chui_lab.fractions import PoleConfiguration
from chui_lab.norms import norm_sq_gram, psi_norm_sq
from chui_lab.optimize import (Objective, bfgs_descent, default_threads, distance_to_SFN,
                               finite_difference_gradient, minimize_norm, norm_gradient, set_distance_experiment)
from chui_lab.thompson import corpus
from chui_lab.weights import LogPower, MinDelta, PowerAlpha

A1 = PowerAlpha(1.0)


def test_bfgs_on_a_quadratic():
    A = np.diag([1.0, 10.0, 100.0])
    b = np.array([1.0, -2.0, 3.0])
    res = bfgs_descent(lambda x: (0.5 * x @ A @ x - b @ x, A @ x - b), np.zeros(3), tol=1e-10)
    assert res.converged
    assert np.allclose(res.x, np.linalg.solve(A, b), atol=1e-9)


@pytest.mark.parametrize("g", [A1, PowerAlpha(0.5), PowerAlpha(2.0), LogPower(2.0), MinDelta(0.3)], ids=str)
def test_gradient_matches_finite_differences(g):
    theta = np.random.default_rng(1).uniform(0, 2 * math.pi, 6)
    obj = Objective(g)
    assert np.allclose(obj(theta)[1], finite_difference_gradient(obj, theta), atol=1e-6)
    target = Objective(g, target=corpus()["(z+1)/3"])
    assert np.allclose(target(theta)[1], finite_difference_gradient(target, theta), atol=1e-6)


def test_objective_value_is_the_gram_norm():
    c = PoleConfiguration([0.0, 1.0, 2.0, 4.0])
    assert Objective(A1)(c.angles, False)[0] == pytest.approx(norm_sq_gram(c, A1).value_sq, rel=1e-14)
    assert norm_gradient(PoleConfiguration.equispaced(5), A1) == pytest.approx(np.zeros(5), abs=1e-12)


def test_target_objective_matches_direct_expansion():
    # ||f - h||^2 = ||f||^2 - 2 Re<f, h> + ||h||^2 with <1/2, h> = -1/2 Σ conj(e^{-i theta}) c_0 kappa
    f = corpus()["1/2"]
    theta = np.array([0.3, 2.0, 4.4])
    val = Objective(A1, target=f)(theta, False)[0]
    h_sq = norm_sq_gram(PoleConfiguration(theta), A1).value_sq
    cross = 2 * 0.5 * 0.5 * np.sum(np.cos(theta))      # kappa c_0 = 1, a_0 of h is -Σ e^{-i theta}
    assert val == pytest.approx(0.25 + h_sq + 2 * cross, rel=1e-13)


@pytest.mark.parametrize("g", [A1, PowerAlpha(0.5), MinDelta(0.3)], ids=str)
@pytest.mark.parametrize("N", [2, 3, 5, 8])
def test_minimizer_is_equispaced(g, N):
    res = minimize_norm(N, g, starts=6, seed=3)
    assert res.converged_fraction > 0
    assert res.gauge_distance_to_equispaced < 1e-5
    assert res.best_norm_sq == pytest.approx(psi_norm_sq(N, g).value_sq, rel=1e-10)


def test_minimize_rejects_bad_arguments():
    with pytest.raises(DomainError):
        minimize_norm(1, A1)
    with pytest.raises(DomainError):
        minimize_norm(4, A1, starts=0)


def test_no_converged_start_raises_with_trace():
    with pytest.raises(ConvergenceError) as exc:
        minimize_norm(6, A1, starts=2, max_iter=1)
    assert len(exc.value.trace) == 2


def test_threads_do_not_change_the_answer():
    a = minimize_norm(6, A1, starts=4, seed=9, threads=1)
    b = minimize_norm(6, A1, starts=4, seed=9, threads=4)
    assert a.start_values == b.start_values


def test_default_threads_reads_environment(monkeypatch):
    monkeypatch.setenv("CHUI_LAB_THREADS", "3")
    assert default_threads() == 3
    monkeypatch.setenv("CHUI_LAB_THREADS", "junk")
    assert default_threads() == 1


def test_distance_to_zero_is_the_norm_problem():
    r = distance_to_SFN(None, 4, A1, starts=3)
    assert r.best_norm_sq == pytest.approx(psi_norm_sq(4, A1).value_sq, rel=1e-10)


def test_distance_to_constant_is_below_the_norm_of_psi_plus_f():
    f = corpus()["1/2"]
    r = distance_to_SFN(f, 16, A1, starts=3)
    assert r.converged_fraction > 0
    # any configuration is an upper bound, in particular the equispaced one
    eq = Objective(A1, target=f)(PoleConfiguration.equispaced(16).angles, False)[0]
    assert r.best_norm_sq <= eq + 1e-12


@pytest.mark.parametrize("n,k", [(1, 1), (2, 1), (2, 3)])
def test_set_distance_never_exceeds_the_witness(n, k):
    rep = set_distance_experiment(n, k, A1, starts=4)
    assert rep.passed
    assert rep.best_distance_sq <= rep.witness_sq * (1 + 1e-9)
    assert len(rep.h1) == n and len(rep.h2) == n + k


@settings(max_examples=15)
@given(st.integers(3, 10), st.integers(0, 2 ** 32 - 1))
def test_descent_is_monotone_up_to_rounding(N, seed):
    obj = Objective(A1)
    x0 = np.random.default_rng(seed).uniform(0, 2 * math.pi, N)
    res = bfgs_descent(obj, x0)
    trace = np.array(res.trace)
    noise = 64 * np.finfo(float).eps * N * np.maximum(np.abs(trace[:-1]), 1.0)
    assert np.all(np.diff(trace) <= noise)


def test_gradient_check_on_many_configurations():
    rng = np.random.default_rng(21)
    obj = Objective(PowerAlpha(0.5))
    for _ in range(100):
        theta = rng.uniform(0, 2 * math.pi, int(rng.integers(2, 13)))
        an = obj(theta)[1]
        fd = finite_difference_gradient(obj, theta, step=1e-6)
        assert np.linalg.norm(an - fd) <= 1e-5 * max(np.linalg.norm(an), 1e-3)


@pytest.mark.parametrize("N", [4, 8, 16])
def test_alpha2_minimum_stays_above_a_loose_floor(N):
    res = minimize_norm(N, PowerAlpha(2.0), starts=5, seed=0)
    assert res.best_norm_sq >= 0.05 * N ** (1 - 2.0)


def test_set_distance_examples():
    assert set_distance_experiment(1, 1, A1, starts=3).best_distance_sq <= 2.0 + 1e-9
    assert set_distance_experiment(2, 2, A1, starts=3).best_distance_sq <= 8 * (1 - math.log(2)) + 1e-9
