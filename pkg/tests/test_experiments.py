import json
import math

import pytest

from chui_lab.errors import DomainError, UsageError
from chui_lab.experiments import (PI_OVER_SQRT3, ExperimentReport, closure_density_demo, closure_lower_bound_check,
                                  constructive_distance_sq, distance_limit_experiment)
from chui_lab.norms import psi_norm_sq
from chui_lab.thompson import corpus
from chui_lab.weights import ExpPower, PowerAlpha


def test_report_checks_and_serialization():
    rep = ExperimentReport("demo", {"x": 1})
    rep.check("lt", 1.0, "<", 2.0)
    rep.check("gt_with_slack", 1.0, ">", 1.2, 0.3)
    rep.check_decreasing("dec", [3.0, 2.0, 2.0])
    assert rep.passed
    rep.check("fails", 3.0, "<=", 2.0)
    assert not rep.passed
    json.dumps(rep.to_dict())
    with pytest.raises(ValueError):
        rep.check("bad", 1.0, "!=", 1.0)


def test_constructive_distance_of_zero_is_psi():
    g = PowerAlpha(1.0)
    assert constructive_distance_sq(None, 8, g) == psi_norm_sq(8, g).value_sq


def test_constructive_distance_of_constant_is_below_psi_plus_norm():
    g = PowerAlpha(1.0)
    f = corpus()["1/2"]
    d = constructive_distance_sq(f, 32, g)
    assert 0 < d < (math.sqrt(psi_norm_sq(32, g).value_sq) + 0.5) ** 2


def test_closure_lower_branch_small_sweep():
    rep = closure_lower_bound_check(None, Ns=(2, 4, 8), starts=3)
    assert rep.passed
    names = {a.name for a in rep.assertions}
    assert "zero_target_matches_psi" in names
    assert any("consistent with" in n for n in rep.notes)


def test_closure_lower_branch_rejects_small_N():
    with pytest.raises(DomainError):
        closure_lower_bound_check(None, Ns=(1, 4))


def test_density_branch_needs_little_o_weight():
    with pytest.raises(UsageError):
        closure_density_demo(corpus()["1/2"], PowerAlpha(1.0))


def test_density_branch_for_zero_target():
    rep = closure_density_demo(None, PowerAlpha(2.0), Ns=(16, 32, 64))
    assert rep.passed
    assert rep.references["limit_constant"]["value"] == pytest.approx(6 * 1.2020569031595942)  # Gamma(4) zeta(3)


def test_density_branch_decreases_for_exponential_weight():
    rep = closure_density_demo(corpus()["(z+1)/3"], ExpPower(1.0), Ns=(16, 32, 64), factor=1.0)
    dec = [a for a in rep.assertions if a.name == "distance_decreasing"][0]
    assert dec.passed


def test_distance_limit_small_sweep():
    rep = distance_limit_experiment(None, Ns=(8, 16), starts=2)
    assert rep.passed
    assert rep.references["pi_over_sqrt3"]["value"] == PI_OVER_SQRT3
    assert all(row["gauge_distance_to_equispaced"] < 1e-3 for row in rep.series)
