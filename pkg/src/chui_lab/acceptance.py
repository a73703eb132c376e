"""The ten acceptance criteria as runnable checks.

Each ``criterion_<k>`` returns a :class:`CriterionResult`; :func:`run_all`
runs a selection and is what ``chui-lab selftest`` calls.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import asymptotics as asy
from .experiments import (PI_OVER_SQRT3, closure_density_demo, closure_lower_bound_check,
                          distance_limit_experiment)
from .fractions import PoleConfiguration
from .moments import fejer_kernel, random_trials
from .norms import norm_sq_gram, norm_sq_quadrature, psi_norm_sq
from .optimize import minimize_norm
from .thompson import (CALIBRATED_C0, check_integral_bound, check_pointwise_bound, check_rho_inequality,
                       corpus, disk_samples, log10_sup_error, sup_error, thompson_approximant)
from .weights import ExpPower, LogPower, MinDelta, PowerAlpha, check_strict_convexity


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    summary: str
    details: dict = field(default_factory=dict)
    runtime_s: float = 0.0

    def line(self) -> str:
        return f"criterion {self.number:2d} {'PASS' if self.passed else 'FAIL'}  {self.title}: {self.summary}"

    def to_dict(self):
        return {"number": self.number, "title": self.title, "passed": self.passed, "summary": self.summary,
                "details": self.details, "runtime_s": self.runtime_s}


def _timed(func):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = func(*args, **kwargs)
        res.runtime_s = time.perf_counter() - t0
        return res
    wrapper.__name__ = func.__name__
    wrapper.__doc__ = func.__doc__
    return wrapper


@_timed
def criterion_1(seed: int = 0) -> CriterionResult:
    """Scaled norms rise monotonically to Γ(α+2)ζ(α+1) and sit within 1% of it at N = 10^4."""
    Ns = asy.parse_Ns("1:8192:geom") + [10_000]
    rows = {}
    ok = True
    for alpha in (0.5, 1.0, 2.0):
        rep = asy.scaled_norm_sequence(alpha, Ns)
        last = rep.ratios[-1]
        good = rep.monotone_increasing and 0.99 <= last < 1.0
        ok &= good
        rows[str(alpha)] = {"limit": rep.reference, "ratio_at_1e4": last, "monotone": rep.monotone_increasing}
    rows["pi_sq_over_3"] = asy.limit_constant(1.0)
    s = ", ".join(f"alpha={a}: {rows[a]['ratio_at_1e4']:.5f}" for a in ("0.5", "1.0", "2.0"))
    return CriterionResult(1, "limit constant", ok, f"ratio to limit at N=1e4 {s}", rows)


@_timed
def criterion_2(seed: int = 0) -> CriterionResult:
    """``||Psi_{10^4}||_1`` in ``[pi/sqrt 3 - 0.02, pi/sqrt 3]``."""
    val = math.sqrt(psi_norm_sq(10_000, PowerAlpha(1.0)).value_sq)
    ok = PI_OVER_SQRT3 - 0.02 <= val <= PI_OVER_SQRT3
    return CriterionResult(2, "pi/sqrt(3) limit", ok, f"||Psi_1e4||_1 = {val:.6f}, limit {PI_OVER_SQRT3:.6f}",
                           {"value": val, "limit": PI_OVER_SQRT3})


@_timed
def criterion_3(seed: int = 0, configs: int = 50) -> CriterionResult:
    """Gram and area-quadrature norms agree to 1e-6 on random configurations; closed-form anchors."""
    weights = [PowerAlpha(0.5), PowerAlpha(1.0), PowerAlpha(2.0), LogPower(2.0)]
    rng = np.random.default_rng([seed, 3])
    worst = 0.0
    for _ in range(configs):
        c = PoleConfiguration.random(int(rng.integers(1, 17)), rng)
        quad = norm_sq_quadrature(c, weights)
        for g, q in zip(weights, quad):
            ref = norm_sq_gram(c, g).value_sq
            worst = max(worst, abs(q.value_sq - ref) / ref)
    g1 = PowerAlpha(1.0)
    one = PoleConfiguration([0.0])
    two = PoleConfiguration.equispaced(2)
    psi2 = 8.0 * (1.0 - math.log(2.0))
    anchors = {
        "kernel_gram": norm_sq_gram(one, g1).value_sq - 2.0,
        "kernel_quad": norm_sq_quadrature(one, g1).value_sq - 2.0,
        "psi2_gram": norm_sq_gram(two, g1).value_sq - psi2,
        "psi2_quad": norm_sq_quadrature(two, g1).value_sq - psi2,
        "psi2_radial": psi_norm_sq(2, g1).value_sq - psi2,
    }
    worst_anchor = max(abs(v) for v in anchors.values())
    ok = worst < 1e-6 and worst_anchor < 1e-8
    return CriterionResult(3, "engine agreement", ok,
                           f"max relative gram/quad gap {worst:.2e} over {configs} configs, "
                           f"max anchor error {worst_anchor:.2e}",
                           {"max_relative_gap": worst, "anchor_errors": anchors})


@_timed
def criterion_4(seed: int = 0, starts: int = 20, perturbations: int = 100) -> CriterionResult:
    """Multistart minimization lands on the equispaced configuration; perturbations raise the norm."""
    weights = [PowerAlpha(0.5), PowerAlpha(1.0), MinDelta(0.3)]
    rng = np.random.default_rng([seed, 4])
    worst_gauge = 0.0
    worst_value = 0.0
    min_gain = math.inf
    converged = []
    for g in weights:
        for N in range(2, 9):
            ref = psi_norm_sq(N, g).value_sq
            res = minimize_norm(N, g, starts=starts, seed=seed)
            converged.append(res.converged_fraction)
            for ok, v, d in zip(res.start_converged, res.start_values, res.start_gauge_distances):
                if ok:
                    worst_gauge = max(worst_gauge, d)
                    worst_value = max(worst_value, abs(v - ref))
            base = PoleConfiguration.equispaced(N)
            for _ in range(perturbations):
                c = PoleConfiguration(base.angles + rng.uniform(-1e-2, 1e-2, N))
                min_gain = min(min_gain, norm_sq_gram(c, g).value_sq - ref)
    ok = worst_gauge < 1e-3 and worst_value < 1e-6 and min_gain > 0
    return CriterionResult(4, "equispaced minimality", ok,
                           f"max gauge distance {worst_gauge:.2e}, max |value - psi| {worst_value:.2e}, "
                           f"min perturbation gain {min_gain:.2e}",
                           {"max_gauge_distance": worst_gauge, "max_value_gap": worst_value,
                            "min_perturbation_gain": min_gain, "min_converged_fraction": min(converged)})


@_timed
def criterion_5(seed: int = 0) -> CriterionResult:
    """``phi''`` positive for alpha <= 1 and somewhere negative for alpha > 1."""
    rows = {}
    ok = True
    for alpha in (0.25, 0.5, 1.0, 1.5, 2.0, 3.0):
        rep = check_strict_convexity(PowerAlpha(alpha), 10_000)
        want = alpha <= 1.0
        ok &= rep.all_positive == want
        rows[str(alpha)] = rep.min_value
    s = ", ".join(f"{a}: {v:.3g}" for a, v in rows.items())
    return CriterionResult(5, "convexity dichotomy", ok, f"min phi'' by alpha {s}", rows)


@_timed
def criterion_6(seed: int = 0, trials: int = 1000) -> CriterionResult:
    """Moment and Fejér-weighted bounds on random and adversarial families; Fejér nonnegativity."""
    rows = {}
    ok = True
    for N in (2, 4, 8, 16, 32, 64):
        t = random_trials(N, trials, seed)
        ok &= t.moment_all_pass and t.fejer_all_pass and t.adversarial_pass
        rows[N] = t.to_dict()
    x = np.linspace(-2 * math.pi, 2 * math.pi, 10_001)
    fmin = min(float(np.min(fejer_kernel(j, x))) for j in (2, 5, 17, 101))
    ok &= fmin >= 0.0
    delta = min(r["min_moment_ratio"] for r in rows.values())
    return CriterionResult(6, "moment bound", ok,
                           f"min sum/N^2 {delta:.3f} (floor 0.5), Fejer min {fmin:.2e}",
                           {"per_N": rows, "fejer_min": fmin})


@_timed
def criterion_7(seed: int = 0) -> CriterionResult:
    """Two-integral bracket and cases C and D stay within factor-3 bands."""
    Ns = asy.parse_Ns("10:10000:log")
    reps = {
        "bracket alpha=1": asy.bracket_sweep(PowerAlpha(1.0), Ns),
        "bracket logpow=2": asy.bracket_sweep(LogPower(2.0), Ns),
        "case C logpow=2": asy.rate_regimes("C", LogPower(2.0), Ns),
        "case D exppow=1": asy.rate_regimes("D", ExpPower(1.0), asy.parse_Ns("50:2000:log")),
    }
    ok = all(r.passed for r in reps.values())
    s = ", ".join(f"{k} {r.band_ratio:.2f}" for k, r in reps.items())
    return CriterionResult(7, "rate regimes", ok, f"band max/min: {s}",
                           {k: {"band": r.band, "band_ratio": r.band_ratio, "passed": r.passed}
                            for k, r in reps.items()})


@_timed
def criterion_8(seed: int = 0, samples: int = 10_000) -> CriterionResult:
    """Thompson construction: local uniform convergence, pointwise bound, rho inequality, circle means."""
    Ns = (64, 128, 256, 512, 1024)
    radius = 0.4
    funcs = corpus()
    sup_ok = True
    sups = {}
    logs = {}
    for name, f in funcs.items():
        sups[name] = sup_error(f, thompson_approximant(f, 1024), radius)
        # double precision cannot see errors below ~1e-13; the decrease is checked in high precision
        logs[name] = [log10_sup_error(f, N, radius) for N in Ns]
        sup_ok &= sups[name] < 0.05 and bool(np.all(np.diff(logs[name]) < 0))
    point_ok = True
    point_margin = math.inf
    for i, (name, f) in enumerate(funcs.items()):
        for N in Ns:
            h = thompson_approximant(f, N)
            z = disk_samples(np.random.default_rng([seed, 8, i, N]), samples, h.poles)
            rep = check_pointwise_bound(h, f.sup_bound_M, CALIBRATED_C0, z)
            point_ok &= rep.passed
            point_margin = min(point_margin, rep.min_margin)
    rho_ok = True
    for p in (1.0, 1.5, 2.0, 3.0):
        for beta in (0.1, 1.0, 10.0):
            rho_ok &= check_rho_inequality(p, beta, 100_000, seed).passed
    circle_ok = True
    circle_margin = math.inf
    for f in funcs.values():
        for N in (64, 256):
            rep = check_integral_bound(f, N, 2.0, 1.0, CALIBRATED_C0, (0.5, 0.9, 0.99, 1.0 - 1.0 / N))
            circle_ok &= rep.passed
            circle_margin = min(circle_margin, rep.min_margin)
    ok = sup_ok and point_ok and rho_ok and circle_ok
    worst_sup = max(sups.values())
    return CriterionResult(8, "Thompson construction", ok,
                           f"max sup error at N=1024 {worst_sup:.1e} (log10 sweeps decreasing: {sup_ok}), "
                           f"pointwise {point_ok} (C0={CALIBRATED_C0}), rho {rho_ok}, circle means {circle_ok}",
                           {"sup_error_1024": sups, "log10_sup_error": logs, "pointwise_min_margin": point_margin,
                            "rho_passed": rho_ok, "circle_min_margin": circle_margin})


@_timed
def criterion_9(seed: int = 0) -> CriterionResult:
    """Constructive and optimized distances from 1/2 bracket pi/sqrt 3; f = 0 gives Psi_N."""
    half = distance_limit_experiment(corpus()["1/2"], Ns=(64, 128, 256, 512), seed=seed)
    zero = distance_limit_experiment(None, Ns=(8, 64, 512), seed=seed)
    last = half.series[-1]
    ok = half.passed and zero.passed
    return CriterionResult(9, "distance limit", ok,
                           f"f=1/2, N=512: constructive {last['constructive']:.6f}, optimized "
                           f"{last['optimized']:.6f}; f=0 matches Psi_N: {zero.passed}",
                           {"half": half.to_dict(), "zero": zero.to_dict()})


@_timed
def criterion_10(seed: int = 0, starts: int = 20) -> CriterionResult:
    """Density for alpha = 2 and the distance floor for alpha = 1."""
    dens = closure_density_demo(corpus()["1/2"], PowerAlpha(2.0), Ns=(32, 64, 128, 256, 512))
    lows = {name: closure_lower_bound_check(f, Ns=(2, 4, 8, 16, 32, 64), starts=starts, seed=seed)
            for name, f in (("0", None), ("1/2", corpus()["1/2"]))}
    low_min = {name: min(r["distance"] for r in rep.series) for name, rep in lows.items()}
    low_ok = all(v > PI_OVER_SQRT3 - 0.5 for v in low_min.values())
    last = dens.series[-1]
    ok = dens.passed and low_ok
    return CriterionResult(10, "closure dichotomy", ok,
                           f"alpha=2: ||1/2 - h_512|| / ||1/2|| = {last['relative']:.4f} (target < 0.1); "
                           f"alpha=1: min distance {min(low_min.values()):.4f} > {PI_OVER_SQRT3 - 0.5:.4f}",
                           {"density": dens.to_dict(), "lower": {k: v.to_dict() for k, v in lows.items()}})


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 11)}


def run_all(selected=None, seed: int = 0, echo=None) -> list[CriterionResult]:
    """Run the selected criteria (all by default); ``echo`` receives each result line."""
    out = []
    for k in selected or sorted(CRITERIA):
        res = CRITERIA[k](seed=seed)
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out
