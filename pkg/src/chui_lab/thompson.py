"""Constructive approximation of bounded analytic functions by simplest fractions.

Given a polynomial ``f`` with ``sup_{|z|=1} |f| <= M`` and ``N > 2M`` the
pole-placement function

    W_N(t) = N t - 2 ∫_0^t Re(e^{2 pi i u} f(e^{2 pi i u})) du

is strictly increasing from ``W_N(0) = 0`` to ``W_N(1) = N``.  Poles at
``e^{2 pi i x_k}`` with ``W_N(x_k) = k`` give ``h_N`` with ``h_N -> f``
locally uniformly in the disk.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, MonotonicityError, QuadratureError
from .fractions import PoleConfiguration, SimplestFraction, psi
from .weights import Weight, moment_coefficients

TWO_PI = 2.0 * math.pi
SUP_SAMPLES = 4096
SUP_SAFETY = 1e-3

#: Empirical stand-in for the unnamed absolute constant of the pointwise bound.
#: 1.1 x the largest ratio seen by :func:`calibrate_C0` over the built-in corpus,
#: together with the stress constants, N in {64, ..., 1024}, 10^4 samples each,
#: seed 20260101.
CALIBRATED_C0 = 0.8790


@dataclass(frozen=True, eq=False)
class BoundedAnalyticFunction:
    """Polynomial ``Σ_d taylor[d] z^d`` with a sampled sup bound on the circle."""

    taylor: np.ndarray
    sup_bound_M: float
    label: str = ""

    @classmethod
    def from_coefficients(cls, coeffs, label: str = "", samples: int = SUP_SAMPLES):
        a = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
        if a.size == 0:
            a = np.zeros(1, dtype=complex)
        a.setflags(write=False)
        z = np.exp(1j * TWO_PI * np.arange(samples) / samples)
        M = float(np.max(np.abs(np.polyval(a[::-1], z)))) * (1.0 + SUP_SAFETY)
        return cls(a, M, label or _describe(a))

    @classmethod
    def constant(cls, c: complex):
        return cls.from_coefficients([c], label=f"const:{c.real:g}" if complex(c).imag == 0 else "")

    @property
    def degree(self) -> int:
        return len(self.taylor) - 1

    @property
    def is_zero(self) -> bool:
        return not np.any(self.taylor)

    def __call__(self, z):
        return np.polyval(self.taylor[::-1], np.asarray(z, dtype=complex))

    def norm_sq(self, g: Weight) -> float:
        """``kappa Σ |a_d|^2 c_d`` (monomials are orthogonal)."""
        mc = moment_coefficients(g, max(self.degree, 0))
        return g.kappa * float(np.dot(np.abs(self.taylor) ** 2, mc.values[:len(self.taylor)]))

    def to_json(self) -> str:
        return json.dumps([[float(a.real), float(a.imag)] for a in self.taylor])


def _describe(a) -> str:
    terms = []
    for d, c in enumerate(a):
        if c != 0:
            coef = f"{c.real:g}" if c.imag == 0 else f"({c.real:g}{c.imag:+g}j)"
            terms.append(coef if d == 0 else f"{coef}*z^{d}")
    return " + ".join(terms) or "0"


def dilate(f: BoundedAnalyticFunction, delta: float) -> BoundedAnalyticFunction:
    """``z -> f((1 - delta) z)``; for a general bounded function this is the
    step that makes a truncated Taylor polynomial a faithful stand-in."""
    if not 0.0 <= delta < 1.0:
        raise DomainError("delta must lie in [0, 1)")
    scale = (1.0 - delta) ** np.arange(len(f.taylor))
    return BoundedAnalyticFunction.from_coefficients(f.taylor * scale, label=f"dilate({f.label},{delta:g})")


def corpus() -> dict[str, BoundedAnalyticFunction]:
    """Built-in test functions: 0, 1/2, z/2, (z+1)/3, 0.4 z^2."""
    mk = BoundedAnalyticFunction.from_coefficients
    return {
        "0": mk([0.0], "0"),
        "1/2": mk([0.5], "1/2"),
        "z/2": mk([0.0, 0.5], "z/2"),
        "(z+1)/3": mk([1 / 3, 1 / 3], "(z+1)/3"),
        "0.4z^2": mk([0.0, 0.0, 0.4], "0.4z^2"),
    }


def parse_function(text: str) -> BoundedAnalyticFunction:
    """``zero``, ``const:<c>``, ``taylor:<file.json>`` or a corpus name."""
    text = text.strip()
    if text in ("zero", "0"):
        return corpus()["0"]
    if text.startswith("const:"):
        return BoundedAnalyticFunction.constant(complex(text[6:]))
    if text.startswith("taylor:"):
        data = json.loads(Path(text[7:]).read_text(encoding="utf-8"))
        try:
            coeffs = [complex(re, im) for re, im in data]
        except (TypeError, ValueError):
            raise DomainError("taylor file must hold a JSON array of [re, im] pairs") from None
        return BoundedAnalyticFunction.from_coefficients(coeffs, label=text)
    table = corpus()
    if text in table:
        return table[text]
    raise DomainError(f"cannot parse function {text!r}")


# --------------------------------------------------------------------------
# pole placement
# --------------------------------------------------------------------------

def _check_monotone(f: BoundedAnalyticFunction, N: int):
    if N <= 2.0 * f.sup_bound_M:
        raise MonotonicityError(f"N = {N} must exceed 2M = {2 * f.sup_bound_M:.4g}")


def _W(f, N, t):
    t = np.asarray(t, dtype=float)
    d1 = np.arange(1, len(f.taylor) + 1)
    # reduce the phase mod 1 first so that W(1) = N holds exactly
    phase = np.mod(np.multiply.outer(t, d1), 1.0)
    terms = f.taylor * (np.exp(1j * TWO_PI * phase) - 1.0) / (1j * TWO_PI * d1)
    return N * t - 2.0 * terms.sum(axis=-1).real


def _W_prime(f, N, t):
    z = np.exp(1j * TWO_PI * np.asarray(t, dtype=float))
    return N - 2.0 * (z * f(z)).real


def weight_function_W(f: BoundedAnalyticFunction, N: int, t):
    """``W_N(t)`` from termwise antiderivatives of the Taylor polynomial."""
    _check_monotone(f, N)
    out = _W(f, N, t)
    return float(out) if np.ndim(out) == 0 else out


def construct_poles(f: BoundedAnalyticFunction, N: int) -> PoleConfiguration:
    """Angles ``2 pi x_k`` with ``W_N(x_k) = k``, ``k = 0..N-1``.

    Bisection on the bracket implied by ``N - 2M <= W' <= N + 2M`` down to
    width 1e-10, then at most five Newton steps.
    """
    _check_monotone(f, N)
    M = f.sup_bound_M
    k = np.arange(N, dtype=float)
    lo = np.clip(k / (N + 2 * M), 0.0, 1.0)
    hi = np.clip(k / (N - 2 * M), 0.0, 1.0)
    while np.max(hi - lo) > 1e-10:
        mid = 0.5 * (lo + hi)
        below = _W(f, N, mid) < k
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    x = 0.5 * (lo + hi)
    for _ in range(5):
        res = _W(f, N, x) - k
        if np.max(np.abs(res)) < 1e-12:
            break
        x = x - res / _W_prime(f, N, x)
    x[0] = 0.0
    if np.any(np.diff(x) <= 0) or x[-1] >= 1.0:
        raise MonotonicityError("root finder produced unordered nodes")
    return PoleConfiguration(TWO_PI * x)


def pole_nodes(f: BoundedAnalyticFunction, N: int) -> np.ndarray:
    """The ``x_k`` in ``[0, 1)`` (angles divided by ``2 pi``)."""
    return construct_poles(f, N).angles / TWO_PI


def thompson_approximant(f: BoundedAnalyticFunction, N: int) -> SimplestFraction:
    return SimplestFraction(construct_poles(f, N))


def polar_grid(radius: float, n: int = 64) -> np.ndarray:
    r = radius * np.arange(1, n + 1) / n
    t = TWO_PI * np.arange(n) / n
    return (r[:, None] * np.exp(1j * t)[None, :]).ravel()


def sup_error(f: BoundedAnalyticFunction, h: SimplestFraction, radius: float, n: int = 64) -> float:
    """``max |f - h|`` on an ``n x n`` polar grid of ``|z| <= radius``.

    In double precision this bottoms out near ``N * 1e-16``; see
    :func:`log10_sup_error` for the true size.
    """
    z = polar_grid(radius, n)
    return float(np.max(np.abs(f(z) - h(z))))


def log10_sup_error(f: BoundedAnalyticFunction, N: int, radius: float, n: int = 64,
                    dps: int | None = None) -> float:
    """``log10 max |f - h_N|`` on ``n`` points of ``|z| = radius`` with poles and sums in mpmath.

    ``f - h_N`` is analytic on the closed disk, so its maximum over the disk
    is attained on the rim.  The error decays like ``radius^N``, far below
    double precision (and below the float range), hence the logarithm and a
    working precision that grows with ``N``.
    """
    import mpmath

    _check_monotone(f, N)
    if dps is None:
        dps = int(N * math.log10(1.0 / radius)) + 30
    x0 = pole_nodes(f, N)
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpc(complex(a)) for a in f.taylor]
        two_pi_i = 2j * mpmath.pi
        tol = mpmath.mpf(10) ** (-dps + 5)

        def fval(z):
            return mpmath.polyval(coeffs[::-1], z)

        def W(x):
            acc = mpmath.mpc(0)
            for d, a in enumerate(coeffs):
                acc += a * (mpmath.exp(two_pi_i * (d + 1) * x) - 1) / (two_pi_i * (d + 1))
            return N * x - 2 * acc.real

        poles = []
        for k, xk in enumerate(x0):
            x = mpmath.mpf(float(xk))
            for _ in range(60):
                e = mpmath.exp(two_pi_i * x)
                step = (W(x) - k) / (N - 2 * (e * fval(e)).real)
                x -= step
                if abs(step) < tol:
                    break
            poles.append(mpmath.exp(two_pi_i * x))
        worst = mpmath.mpf(0)
        for j in range(n):
            z = radius * mpmath.exp(two_pi_i * mpmath.mpf(j) / n)
            h = mpmath.fsum(1 / (z - a) for a in poles)
            worst = max(worst, abs(fval(z) - h))
        return float(mpmath.log10(worst)) if worst > 0 else -math.inf


# --------------------------------------------------------------------------
# growth bounds
# --------------------------------------------------------------------------

@dataclass
class BoundCheckReport:
    name: str
    C0: float
    passed: bool
    min_margin: float
    samples: int
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def disk_samples(rng, n: int, poles: PoleConfiguration | None = None) -> np.ndarray:
    """Random points with ``1 - |z|`` log-uniform on ``[1e-6, 1]``.

    With ``poles`` half of the points sit on rays toward randomly chosen
    poles (angular jitter below ``1 - |z|``), where the growth bound is tight.
    """
    m = n if poles is None else n - n // 2
    gap = 10.0 ** (-rng.uniform(0.0, 6.0, m))
    z = (1.0 - gap) * np.exp(1j * rng.uniform(0.0, TWO_PI, m))
    if poles is None:
        return z
    k = n - m
    gap = 10.0 ** (-rng.uniform(0.0, 6.0, k))
    ang = poles.angles[rng.integers(0, poles.N, k)] + rng.uniform(-0.5, 0.5, k) * gap
    return np.concatenate([z, (1.0 - gap) * np.exp(1j * ang)])


def pointwise_rhs(z, M: float, C0: float):
    gap = 1.0 - np.abs(z)
    return 1.0 / gap + C0 * M * np.log(math.e / gap)


def check_pointwise_bound(h, M: float, C0: float, samples) -> BoundCheckReport:
    """``|h(z)| <= 1/(1-|z|) + C0 M log(e/(1-|z|))`` on every sample."""
    z = np.asarray(samples, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("samples must lie in the open unit disk")
    lhs = np.abs(h(z))
    margin = pointwise_rhs(z, M, C0) - lhs
    i = int(np.argmin(margin))
    return BoundCheckReport("pointwise", C0, bool(margin[i] >= 0), float(margin[i]), len(z),
                            {"worst_z": [float(z[i].real), float(z[i].imag)], "M": M})


def pointwise_ratio(h, M: float, z) -> float:
    """Largest ``(|h| - 1/(1-|z|))_+ / (M log(e/(1-|z|)))`` over the samples."""
    gap = 1.0 - np.abs(z)
    excess = np.maximum(np.abs(h(z)) - 1.0 / gap, 0.0)
    return float(np.max(excess / (M * np.log(math.e / gap))))


def stress_functions() -> dict[str, BoundedAnalyticFunction]:
    """Constants with ``|c| >= 2``: there ``|h| ~ |c|`` exceeds ``1/(1-|z|)`` inside the
    disk, so the logarithmic term is actually exercised (the corpus alone never needs it)."""
    mk = BoundedAnalyticFunction.from_coefficients
    return {"2": mk([2.0], "2"), "-2": mk([-2.0], "-2"), "2i": mk([2j], "2i"), "5": mk([5.0], "5")}


def calibrate_C0(functions=None, Ns=(64, 128, 256, 512, 1024), samples: int = 10_000,
                 seed: int = 20260101, safety: float = 1.1) -> float:
    """``safety`` times the worst ratio over the functions with ``M > 0``.

    Defaults to the corpus together with :func:`stress_functions`.
    """
    if functions is None:
        functions = {**corpus(), **stress_functions()}
    if isinstance(functions, dict):
        functions = list(functions.values())
    worst = 0.0
    for i, f in enumerate(functions):
        if f.sup_bound_M == 0.0:
            continue
        for N in Ns:
            if N <= 2 * f.sup_bound_M:
                continue
            rng = np.random.default_rng([seed, i, N])
            h = thompson_approximant(f, N)
            worst = max(worst, pointwise_ratio(h, f.sup_bound_M, disk_samples(rng, samples, h.poles)))
    return safety * worst


def rho(beta: float, p: float) -> float:
    """Constant in ``(x + y)^p <= (1 + beta) x^p + rho(beta) y^p``."""
    if p < 1:
        raise DomainError("p must be >= 1")
    if beta <= 0:
        raise DomainError("beta must be > 0")
    if p == 1:
        return 1.0
    # (1 + beta) / ((1 + beta)^{1/(p-1)} - 1)^{p-1} rewritten so that p near 1 cannot overflow
    L = math.log1p(beta) / (p - 1.0)
    return math.exp((1.0 - p) * math.log(-math.expm1(-L)))


def check_rho_inequality(p: float, beta: float, samples: int = 100_000, seed: int = 0) -> BoundCheckReport:
    """``(x + y)^p <= (1 + beta) x^p + rho(beta) y^p`` on random pairs ``x, y >= 0``.

    The pairs mix uniform draws on [0, 1] with log-uniform ratios so the
    equality direction ``y / x = (1 + beta)^{1/(p-1)} - 1`` is approached.
    Comparisons allow a relative rounding slack of 1e-13.
    """
    rng = np.random.default_rng([seed, int(p * 1000), int(beta * 1000)])
    half = samples // 2
    x = np.concatenate([rng.uniform(0.0, 1.0, half), np.ones(samples - half)])
    y = np.concatenate([rng.uniform(0.0, 1.0, half), 10.0 ** rng.uniform(-4.0, 4.0, samples - half)])
    r = rho(beta, p)
    lhs = (x + y) ** p
    rhs = (1.0 + beta) * x ** p + r * y ** p
    margin = (rhs - lhs) / np.maximum(rhs, 1e-300)
    return BoundCheckReport("rho_inequality", r, bool(np.all(margin >= -1e-13)), float(margin.min()), samples,
                            {"p": p, "beta": beta})


def circle_mean_p(h, r: float, p: float, nodes: int | None = None, *, rtol: float = 1e-10,
                  max_nodes: int = 1 << 22, return_error: bool = False):
    """``∫_0^1 |h(r e^{2 pi i s})|^p ds`` by the trapezoid rule with node doubling.

    Doubling stops when successive values agree to ``rtol`` or to the rounding
    floor ``(8 eps N / (1 - r))^p`` of a sum of ``N`` kernels, whichever is
    larger; the returned error is at least that floor.
    """
    if not 0.0 < r < 1.0:
        raise DomainError("r must lie in (0, 1)")
    if p < 1:
        raise DomainError("p must be >= 1")
    n_poles = getattr(h, "N", 1)
    n = max(512, 16 * n_poles, nodes or 0)

    def mean(m):
        z = r * np.exp(1j * TWO_PI * np.arange(m) / m)
        return float(np.mean(np.abs(h(z)) ** p))

    floor = (8.0 * np.finfo(float).eps * n_poles / (1.0 - r)) ** p
    cur = mean(n)
    err = math.inf
    while err > max(rtol * abs(cur), floor):
        if 2 * n > max_nodes:
            raise QuadratureError(f"circle mean at r = {r} needs more than {max_nodes} nodes",
                                  err / abs(cur) if cur else err)
        n *= 2
        prev, cur = cur, mean(n)
        err = abs(cur - prev)
    return (cur, max(err, floor)) if return_error else cur


def psi_circle_mean_sq(N: int, r: float) -> float:
    """Closed form of the ``p = 2`` circle mean of ``Psi_N``."""
    x = r ** (2 * N)
    return N * N * r ** (2 * N - 2) / (1.0 - x)


def check_integral_bound(f: BoundedAnalyticFunction, N: int, p: float, beta: float, C0: float,
                         radii) -> BoundCheckReport:
    """Circle-mean growth bound at each radius, plus the ``N (1-r)^{1-p}`` comparison."""
    h = thompson_approximant(f, N)
    psi_h = (lambda z: psi(N, z))
    M = f.sup_bound_M
    rows = []
    ok = True
    worst = math.inf
    for r in radii:
        lhs, err = circle_mean_p(h, r, p, return_error=True)
        psi_mean = psi_circle_mean_sq(N, r) if p == 2 else circle_mean_p(_Sized(psi_h, N), r, p)
        rhs = (1.0 + beta) * psi_mean + rho(beta, p) * (C0 * M * math.log(math.e / (1.0 - r))) ** p
        # a left side below its own error estimate cannot violate the bound
        margin = (rhs - max(lhs - err, 0.0)) / max(rhs, lhs)
        worst = min(worst, margin)
        ok = ok and margin >= 0.0
        row = {"r": r, "lhs": lhs, "lhs_error": err, "rhs": rhs, "psi_mean": psi_mean,
               "relative_margin": margin}
        if r >= 1.0 - 1.0 / N - 1e-15:
            row["ratio_to_N_gap_power"] = lhs / (N * (1.0 - r) ** (1.0 - p))
        rows.append(row)
    return BoundCheckReport("circle_mean", C0, ok, worst, len(rows),
                            {"N": N, "p": p, "beta": beta, "M": M, "rows": rows})


class _Sized:
    """Attach a pole count to a callable so node budgets scale with it."""

    def __init__(self, func, N):
        self.func = func
        self.N = N

    def __call__(self, z):
        return self.func(z)
