import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chui_lab.errors import DomainError, MonotonicityError
from chui_lab.fractions import PoleConfiguration, SimplestFraction, psi
from chui_lab.thompson import (CALIBRATED_C0, BoundedAnalyticFunction, check_integral_bound,
                               check_pointwise_bound, check_rho_inequality, circle_mean_p, construct_poles, corpus,
                               dilate, disk_samples, log10_sup_error, parse_function, pole_nodes,
                               psi_circle_mean_sq, rho, sup_error, thompson_approximant, weight_function_W)

HALF = corpus()["1/2"]


def test_sup_bound_is_slightly_inflated():
    f = BoundedAnalyticFunction.from_coefficients([0.0, 0.5])
    assert 0.5 <= f.sup_bound_M <= 0.5 * 1.001 + 1e-15
    assert corpus()["0"].is_zero and corpus()["0"].sup_bound_M == 0.0


def test_norm_of_polynomial():
    from chui_lab.weights import PowerAlpha
    # ||z/2||^2 in A^2_1 = 1/4 * kappa c_1 = 1/4 * 2/6
    assert corpus()["z/2"].norm_sq(PowerAlpha(1.0)) == pytest.approx(1 / 12)


def test_parse_function_forms(tmp_path):
    assert parse_function("zero").is_zero
    assert parse_function("const:0.5").taylor[0] == 0.5
    path = tmp_path / "f.json"
    path.write_text(json.dumps([[0.1, 0.0], [0.0, 0.2]]))
    f = parse_function(f"taylor:{path}")
    assert f.taylor[1] == 0.2j
    assert parse_function("(z+1)/3").degree == 1
    with pytest.raises(DomainError):
        parse_function("sin(z)")


def test_dilate_scales_coefficients():
    f = dilate(corpus()["0.4z^2"], 0.5)
    assert f.taylor[2] == pytest.approx(0.1)
    with pytest.raises(DomainError):
        dilate(HALF, 1.0)


def test_W_endpoints_and_closed_form():
    N = 9
    t = np.linspace(0, 1, 11)
    W = weight_function_W(HALF, N, t)
    assert W[0] == 0.0 and W[-1] == pytest.approx(N, abs=1e-13)
    assert np.allclose(W, N * t - np.sin(2 * math.pi * t) / (2 * math.pi), atol=1e-13)
    assert np.all(np.diff(W) > 0)


def test_nodes_solve_the_closed_form():
    N = 13
    x = pole_nodes(HALF, N)
    assert np.allclose(N * x - np.sin(2 * math.pi * x) / (2 * math.pi), np.arange(N), atol=1e-11)


def test_zero_function_gives_equispaced_poles():
    c = construct_poles(corpus()["0"], 7)
    assert c.distance_to_equispaced() < 1e-12


def test_construction_needs_N_above_2M():
    f = BoundedAnalyticFunction.constant(2.0)
    with pytest.raises(MonotonicityError):
        construct_poles(f, 4)
    assert construct_poles(f, 5).N == 5


@pytest.mark.parametrize("name", ["1/2", "z/2", "(z+1)/3", "0.4z^2"])
def test_sup_error_decreases(name):
    f = corpus()[name]
    errs = [sup_error(f, thompson_approximant(f, N), 0.4, n=32) for N in (4, 8, 16, 32)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_high_precision_error_agrees_with_double_precision():
    f = corpus()["(z+1)/3"]
    N = 8
    h = thompson_approximant(f, N)
    z = 0.4 * np.exp(2j * math.pi * np.arange(64) / 64)
    direct = float(np.max(np.abs(f(z) - h(z))))
    assert log10_sup_error(f, N, 0.4, n=64) == pytest.approx(math.log10(direct), abs=1e-8)


def test_high_precision_error_keeps_decreasing_past_double_precision():
    vals = [log10_sup_error(HALF, N, 0.4, n=16) for N in (64, 128, 256)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[-1] < -60


def test_pointwise_bound_with_calibrated_constant():
    for name, f in corpus().items():
        if f.is_zero:
            continue
        h = thompson_approximant(f, 128)
        z = disk_samples(np.random.default_rng(4), 2000, h.poles)
        assert check_pointwise_bound(h, f.sup_bound_M, CALIBRATED_C0, z).passed, name


def test_pointwise_bound_rejects_outside_samples():
    h = thompson_approximant(HALF, 8)
    with pytest.raises(DomainError):
        check_pointwise_bound(h, 0.5, 1.0, [1.0 + 0j])


def test_rho_closed_forms():
    assert rho(3.0, 2.0) == pytest.approx(4.0 / 3.0)
    assert rho(0.5, 1.0) == 1.0
    with pytest.raises(DomainError):
        rho(0.0, 2.0)
    with pytest.raises(DomainError):
        rho(1.0, 0.5)


@given(st.floats(1.01, 5), st.floats(0.01, 100))
def test_rho_equality_direction_is_tight(p, beta):
    x = 1.0
    y = (1 + beta) ** (1 / (p - 1)) - 1
    lhs = (x + y) ** p
    rhs = (1 + beta) * x ** p + rho(beta, p) * y ** p
    assert lhs == pytest.approx(rhs, rel=1e-9)


@given(st.floats(1, 5), st.floats(0.01, 100), st.floats(0, 1e3), st.floats(0, 1e3))
def test_rho_inequality_property(p, beta, x, y):
    lhs = (x + y) ** p
    rhs = (1 + beta) * x ** p + rho(beta, p) * y ** p
    assert lhs <= rhs * (1 + 1e-12) + 1e-300


def test_rho_sampled_check():
    assert check_rho_inequality(2.0, 1.0, samples=20_000).passed


@pytest.mark.parametrize("N", [1, 4, 16])
@pytest.mark.parametrize("r", [0.3, 0.9])
def test_psi_circle_mean_closed_form(N, r):
    h = SimplestFraction(PoleConfiguration.equispaced(N))
    assert circle_mean_p(h, r, 2.0) == pytest.approx(psi_circle_mean_sq(N, r), rel=1e-9)


def test_circle_mean_domain():
    h = SimplestFraction(PoleConfiguration.equispaced(3))
    with pytest.raises(DomainError):
        circle_mean_p(h, 1.0, 2.0)
    with pytest.raises(DomainError):
        circle_mean_p(h, 0.5, 0.5)


def test_integral_bound_for_corpus_function():
    rep = check_integral_bound(corpus()["z/2"], 64, 2.0, 1.0, CALIBRATED_C0, [0.5, 0.9, 1 - 1 / 64])
    assert rep.passed
    assert "ratio_to_N_gap_power" in rep.details["rows"][-1]


@pytest.mark.parametrize("name", ["1/2", "z/2", "(z+1)/3", "0.4z^2"])
@pytest.mark.parametrize("r", [0.3, 0.8])
def test_circle_mean_matches_parseval_for_polynomials(name, r):
    f = corpus()[name]
    ref = float(np.sum(np.abs(f.taylor) ** 2 * r ** (2 * np.arange(len(f.taylor)))))
    assert circle_mean_p(f, r, 2.0) == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("name", ["1/2", "z/2", "(z+1)/3", "0.4z^2"])
def test_node_spacing_is_positive(name):
    x = pole_nodes(corpus()[name], 64)
    assert np.min(np.diff(np.append(x, 1.0))) > 0
