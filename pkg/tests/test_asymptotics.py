import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from chui_lab.asymptotics import (bose_integral, bracket_sweep, rate_regimes, limit_constant, parse_Ns,
                                  two_integral_bracket, scaled_norm_sequence)
from chui_lab.errors import DomainError, UsageError
from chui_lab.specfun import gamma, zeta
from chui_lab.weights import ExpPower, LogPower, MinDelta, PowerAlpha


def test_limit_constant_alpha1_is_pi_squared_over_three():
    assert limit_constant(1.0) == pytest.approx(math.pi ** 2 / 3, rel=1e-14)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 1.5, 2.0, 3.0, 7.5])
def test_limit_constant_against_mpmath(alpha):
    ref = float(mpmath.gamma(alpha + 2) * mpmath.zeta(alpha + 1))
    assert limit_constant(alpha) == pytest.approx(ref, rel=1e-13)
    assert bose_integral(alpha) == pytest.approx(ref, rel=1e-10)


@given(st.floats(0.05, 30))
def test_special_functions_against_mpmath(x):
    assert gamma(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-13)
    assert zeta(x + 1.01) == pytest.approx(float(mpmath.zeta(x + 1.01)), rel=1e-12)


def test_limit_constant_domain():
    with pytest.raises(DomainError):
        limit_constant(0.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_scaled_norm_increases_to_the_limit(alpha):
    rep = scaled_norm_sequence(alpha, [1, 4, 16, 64, 256, 1024])
    assert rep.passed and rep.monotone_increasing
    assert all(r < 1 for r in rep.ratios)
    assert rep.ratios[-1] > 0.99


def test_two_integral_bracket_for_power_weight():
    # for t^alpha the two integrals reproduce the N^{1-alpha} growth
    b = two_integral_bracket(PowerAlpha(1.0), 100)
    assert 1 / 3 < b.ratio < 3
    assert b.full == pytest.approx(b.lower_proxy + b.upper_part)


@pytest.mark.parametrize("g", [PowerAlpha(1.0), LogPower(2.0), ExpPower(1.0), MinDelta(0.3)], ids=str)
def test_bracket_stays_in_band(g):
    rep = bracket_sweep(g, [2, 10, 100, 1000])
    assert rep.passed, rep.band


def test_case_a_decreasing():
    Ns = [1, 10, 100, 1000]
    rep = rate_regimes("a", LogPower(2.0), Ns)
    assert rep.passed and rep.name == "case_A"
    # c is the smallest constant with ||Psi_N|| >= exp(-c N) over the sweep
    c = rep.notes["c_measured"]
    for N, v in zip(Ns, rep.values):
        norm = v * math.sqrt(N)
        assert norm >= math.exp(-c * N) * (1 - 1e-12)


def test_case_b_needs_little_o():
    with pytest.raises(UsageError):
        rate_regimes("B", PowerAlpha(1.0), [1, 10])
    assert rate_regimes("B", PowerAlpha(2.0), [10, 100, 1000]).passed


def test_case_c_and_d():
    assert rate_regimes("C", LogPower(2.0), [10, 100, 1000, 10000]).passed
    assert rate_regimes("D", ExpPower(1.0), [50, 200, 2000]).passed
    with pytest.raises(UsageError):
        rate_regimes("C", PowerAlpha(2.0), [10, 100])
    with pytest.raises(UsageError):
        rate_regimes("E", PowerAlpha(2.0), [10, 100])


def test_parse_Ns_forms():
    assert parse_Ns("1:4") == [1, 2, 3, 4]
    assert parse_Ns("1:16:geom") == [1, 2, 4, 8, 16]
    assert parse_Ns("3,5,9") == [3, 5, 9]
    log = parse_Ns("10:1000:log")
    assert log[0] == 10 and log[-1] == 1000 and len(log) == 21
    for bad in ("5:1", "0:3", "1:4:weird", "3,2"):
        with pytest.raises(DomainError):
            parse_Ns(bad)


def test_scaled_norm_monotone_on_every_N_up_to_200():
    for alpha in (0.5, 1.0, 2.0):
        assert scaled_norm_sequence(alpha, range(1, 201)).monotone_increasing


def test_scaled_norm_examples():
    rep = scaled_norm_sequence(1.0, range(1, 101))
    assert rep.values[0] == pytest.approx(2.0)
    assert rep.ratios[0] == pytest.approx(2 / (math.pi ** 2 / 3))
    assert rep.ratios[-1] > 0.95


def test_limit_constant_alpha2():
    assert limit_constant(2.0) == pytest.approx(7.2123414189575657, rel=1e-13)


def test_case_d_log_norms_negative_and_decreasing():
    rep = rate_regimes("D", ExpPower(1.0), [50, 100, 500, 2000])
    logs = rep.notes["log_norm"]
    assert all(v < 0 for v in logs)
    assert all(b < a for a, b in zip(logs, logs[1:]))


def test_case_b_value_against_radial_oracle():
    # kappa N^2 ∫ (1-v)^{N-1} v^alpha / (1 - (1-v)^N) dv in mpmath, split at the 1/N scale
    alpha, N = 1.5, 1000
    with mpmath.workdps(30):
        f = lambda v: N * N * (1 - v) ** (N - 1) * v ** alpha / (1 - (1 - v) ** N)
        pts = [0, mpmath.mpf(1) / (10 * N), mpmath.mpf(1) / N, mpmath.mpf(10) / N, mpmath.mpf(100) / N, 1]
        ref = float((alpha + 1) * mpmath.quad(f, pts))
    rep = rate_regimes("B", PowerAlpha(alpha), [10, 100, N])
    assert rep.passed
    assert rep.values[-1] == pytest.approx(ref, rel=1e-12)
