"""Minimize ``||f - h||_(g)`` over simplest fractions ``h`` with ``N`` poles.

The objective and gradient come from the Gram form, so each evaluation is a
pair sum of the interaction kernel (compiled when available).  Local descent
is a quasi-Newton (BFGS) direction with Armijo backtracking; starts are
independent and seeded by ``(seed, start index)``.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError, MonotonicityError
from .fractions import PoleConfiguration
from .norms import psi_norm_sq
from .weights import Weight, interaction_kernel, moment_coefficients

TWO_PI = 2.0 * math.pi
DEFAULT_STARTS = 20
MAX_ITER = 5000
TOL = 1e-9
ARMIJO = 1e-4
#: steps shorter than this (in radians) count as no progress
XTOL = 1e-12


def default_threads() -> int:
    env = os.environ.get("CHUI_LAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


@dataclass
class DescentResult:
    x: np.ndarray
    value: float
    grad_sup: float
    iterations: int
    converged: bool
    trace: list


@dataclass
class OptimizationResult:
    best: PoleConfiguration
    best_norm_sq: float
    starts: int
    converged_fraction: float
    gauge_distance_to_equispaced: float
    trace: list = field(default_factory=list)
    start_values: list = field(default_factory=list)
    start_gauge_distances: list = field(default_factory=list)
    start_converged: list = field(default_factory=list)

    def to_dict(self, with_trace: bool = False):
        out = asdict(self)
        out["best"] = [float(a) for a in self.best.angles]
        if not with_trace:
            out.pop("trace")
        return out


# --------------------------------------------------------------------------
# objective
# --------------------------------------------------------------------------

class Objective:
    """``||target - Σ_k charge_k/(z - e^{i theta_k})||^2`` and its gradient.

    With no target and unit charges this is ``||h||^2``; mixed charges give
    the distance between two simplest fractions.
    """

    def __init__(self, g: Weight, target=None, charge=None):
        self.g = g
        self.kernel = interaction_kernel(g)
        self.kappa = g.kappa
        self.charge = None if charge is None else np.ascontiguousarray(charge, dtype=float)
        self.target = None if target is None or target.is_zero else target
        if self.target is not None:
            a = np.asarray(self.target.taylor, dtype=complex)
            mc = moment_coefficients(g, len(a) - 1)
            self.ac = a * mc.values[:len(a)]                  # a_s c_s
            self.freq = np.arange(1, len(a) + 1)              # s + 1
            self.target_sq = self.kappa * float(np.dot(np.abs(a) ** 2, mc.values[:len(a)]))
        self.evaluations = 0

    def __call__(self, theta, want_grad: bool = True):
        self.evaluations += 1
        energy, grad = self.kernel.pair_sums(theta, self.charge, want_grad)
        value = self.kappa * energy
        grad = self.kappa * grad
        if self.target is not None:
            # -2 Re<f, h> = 2 kappa Re Σ_s a_s c_s Σ_k q_k e^{i (s+1) theta_k}
            q = np.ones(len(theta)) if self.charge is None else self.charge
            e = np.exp(1j * np.outer(theta, self.freq))       # (N, D+1)
            terms = e @ self.ac                               # Σ_s a_s c_s e^{i(s+1)theta_k}
            value += self.target_sq + 2.0 * self.kappa * float(np.dot(q, terms.real))
            if want_grad:
                dterms = e @ (1j * self.freq * self.ac)
                grad = grad + 2.0 * self.kappa * q * dterms.real
        return value, grad


def finite_difference_gradient(obj, theta, step: float = 1e-5) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    out = np.empty(len(theta))
    for j in range(len(theta)):
        tp = theta.copy()
        tm = theta.copy()
        tp[j] += step
        tm[j] -= step
        out[j] = (obj(tp, False)[0] - obj(tm, False)[0]) / (2 * step)
    return out


def norm_gradient(c: PoleConfiguration, g: Weight) -> np.ndarray:
    """``d ||h||^2 / d theta_j = 2 kappa Σ_{k != j} phi'(theta_j - theta_k)``."""
    return Objective(g)(np.asarray(c.angles), True)[1]


# --------------------------------------------------------------------------
# descent
# --------------------------------------------------------------------------

def bfgs_descent(fun, x0, tol: float = TOL, max_iter: int = MAX_ITER) -> DescentResult:
    """Quasi-Newton descent with Armijo backtracking.

    ``fun(x) -> (value, grad)``.  Stops when ``max|grad| < tol``.  A step is
    accepted on the Armijo condition or, when the change in the objective is
    below its rounding noise (taken as ``64 eps n max(|f|, 1)``, since the
    pair sums add about ``n^2`` terms), when it shrinks the directional
    derivative by 10% or lowers ``max|grad|``.  The gradient stays accurate
    long after differences of ``f`` are lost in rounding.

    Five consecutive accepted steps shorter than ``XTOL`` end the run
    unconverged: that is a kink (coincident poles of opposite charge), not a
    smooth minimum.
    """
    x = np.array(x0, dtype=float)
    n = len(x)
    f, g = fun(x)
    H = np.eye(n)
    trace = [f]
    it = 0
    stall = 0
    flat_run = 0
    short_run = 0
    flat = 64.0 * np.finfo(float).eps * max(n, 1) * max(abs(f), 1.0)
    while it < max_iter:
        gsup = float(np.max(np.abs(g))) if n else 0.0
        if gsup < tol:
            return DescentResult(x, f, gsup, it, True, trace)
        p = -H @ g
        slope = float(p @ g)
        if slope >= 0:
            H = np.eye(n)
            p = -g
            slope = float(p @ g)
        # cap the step so no angle moves more than half a radian
        step = min(1.0, 0.5 / max(float(np.max(np.abs(p))), 1e-300))
        accepted = False
        on_flat = False
        for _ in range(60):
            xn = x + step * p
            fn, gn = fun(xn)
            if fn <= f + ARMIJO * step * slope:
                accepted = True
                break
            # below the noise floor of f, judge the step by the gradient alone
            if fn <= f + flat and (abs(float(gn @ p)) <= 0.9 * abs(slope) or np.max(np.abs(gn)) < gsup):
                accepted = on_flat = True
                break
            step *= 0.5
        it += 1
        # a long run of noise-level steps means the tolerance is below the rounding floor
        flat_run = flat_run + 1 if on_flat else 0
        if flat_run > 50:
            break
        if not accepted:
            if stall >= 2:
                break
            stall += 1
            H = np.eye(n)
            continue
        stall = 0
        s = xn - x
        short_run = short_run + 1 if float(np.max(np.abs(s))) < XTOL else 0
        if short_run >= 5:
            x, f, g = xn, fn, gn
            trace.append(f)
            break
        y = gn - g
        sy = float(s @ y)
        if sy > 1e-300:
            if it == 1:
                H = np.eye(n) * (sy / float(y @ y))
            Hy = H @ y
            rho = 1.0 / sy
            H = H + (rho * rho * float(y @ Hy) + rho) * np.outer(s, s) - rho * (np.outer(Hy, s) + np.outer(s, Hy))
        x, f, g = xn, fn, gn
        trace.append(f)
    gsup = float(np.max(np.abs(g))) if n else 0.0
    return DescentResult(x, f, gsup, it, gsup < tol, trace)


# --------------------------------------------------------------------------
# multistart drivers
# --------------------------------------------------------------------------

def _pick(results, distances):
    """Lowest value; ties (to 1e-12 relative) go to the smallest gauge distance."""
    values = np.array([r.value for r in results])
    best = values.min()
    tied = [i for i, v in enumerate(values) if v <= best + 1e-12 * abs(best) + 1e-15]
    return min(tied, key=lambda i: (distances[i], i))


def _run_starts(tasks, threads):
    threads = threads or default_threads()
    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda t: t(), tasks))
    return [t() for t in tasks]


def _finish(configs, results, with_error=True):
    converged = [r.converged for r in results]
    distances = [c.distance_to_equispaced() for c in configs]
    if with_error and not any(converged):
        raise ConvergenceError("no start converged within the iteration cap",
                               trace=[{"value": r.value, "grad_sup": r.grad_sup,
                                       "iterations": r.iterations} for r in results])
    pool = [i for i, ok in enumerate(converged) if ok] or list(range(len(results)))
    i = pool[_pick([results[j] for j in pool], [distances[j] for j in pool])]
    return OptimizationResult(
        best=configs[i],
        best_norm_sq=float(results[i].value),
        starts=len(results),
        converged_fraction=float(np.mean(converged)),
        gauge_distance_to_equispaced=float(distances[i]),
        trace=list(results[i].trace),
        start_values=[float(r.value) for r in results],
        start_gauge_distances=[float(d) for d in distances],
        start_converged=converged,
    )


def minimize_norm(N: int, g: Weight, starts: int = DEFAULT_STARTS, seed: int = 0, tol: float = TOL,
                  max_iter: int = MAX_ITER, threads: int | None = None) -> OptimizationResult:
    """Multistart minimization of ``||h||^2`` over ``N``-pole simplest fractions.

    The gauge ``theta_0 = 0`` removes the rotation; each start draws uniform
    angles from ``default_rng([seed, start])``.
    """
    if N < 2:
        raise DomainError("N must be >= 2")
    if starts < 1:
        raise DomainError("starts must be >= 1")
    obj = Objective(g)

    def reduced(y):
        theta = np.concatenate([[0.0], y])
        v, gr = obj(theta)
        return v, gr[1:]

    def task(i):
        def run():
            rng = np.random.default_rng([seed, i])
            return bfgs_descent(reduced, rng.uniform(0.0, TWO_PI, N - 1), tol, max_iter)
        return run

    results = _run_starts([task(i) for i in range(starts)], threads)
    configs = [PoleConfiguration(np.concatenate([[0.0], r.x])) for r in results]
    return _finish(configs, results)


def distance_to_SFN(f, N: int, g: Weight, starts: int = DEFAULT_STARTS, seed: int = 0,
                    tol: float = TOL, max_iter: int = MAX_ITER, threads: int | None = None,
                    warm_start: bool = True) -> OptimizationResult:
    """Minimize ``||f - h||^2`` over ``h`` with ``N`` poles on the circle.

    ``f`` is a :class:`BoundedAnalyticFunction` or ``None`` for zero.  The
    Thompson configuration (when ``N > 2M``) is used as the first start.
    """
    if f is None or f.is_zero:
        return minimize_norm(N, g, starts, seed, tol, max_iter, threads)
    obj = Objective(g, target=f)
    x0s = []
    if warm_start:
        from .thompson import construct_poles
        try:
            x0s.append(np.array(construct_poles(f, N).angles))
        except MonotonicityError:
            pass
    tasks = []
    for x0 in x0s:
        tasks.append(lambda x0=x0: bfgs_descent(obj, x0, tol, max_iter))
    for i in range(max(starts - len(x0s), 0)):
        def run(i=i):
            rng = np.random.default_rng([seed, i])
            return bfgs_descent(obj, rng.uniform(0.0, TWO_PI, N), tol, max_iter)
        tasks.append(run)
    results = _run_starts(tasks, threads)
    configs = [PoleConfiguration(r.x) for r in results]
    return _finish(configs, results)


@dataclass
class SetDistanceReport:
    n: int
    k: int
    weight: str
    best_distance_sq: float
    witness_sq: float
    ratio: float
    passed: bool
    converged_fraction: float
    h1: list
    h2: list
    seed: int
    starts: int

    def to_dict(self):
        return asdict(self)


def set_distance_experiment(n: int, k: int, g: Weight, starts: int = DEFAULT_STARTS, seed: int = 0,
                            tol: float = TOL, max_iter: int = MAX_ITER,
                            threads: int | None = None) -> SetDistanceReport:
    """Jointly minimize ``||h1 - h2||^2`` with ``h1`` in ``SF_n``, ``h2`` in ``SF_{n+k}``.

    Only ``best <= ||Psi_k||^2`` is asserted: poles ``P`` for ``h1`` and
    ``P`` plus ``k`` equispaced poles for ``h2`` give exactly a rotated
    ``Psi_k``.  That witness is also the first start.
    """
    if n < 1 or k < 1:
        raise DomainError("n and k must be >= 1")
    charge = np.concatenate([-np.ones(n), np.ones(n + k)])
    obj = Objective(g, charge=charge)

    def reduced(y):
        theta = np.concatenate([[0.0], y])
        v, gr = obj(theta)
        return v, gr[1:]

    witness = psi_norm_sq(k, g).value_sq
    # h1 = equispaced P, h2 = P plus k equispaced poles: h2 - h1 is a rotated Psi_k
    p = TWO_PI * np.arange(n) / n
    wit = np.concatenate([p, p, 0.1234 + TWO_PI * np.arange(k) / k])
    x0s = [wit[1:]]
    for i in range(max(starts - 1, 0)):
        rng = np.random.default_rng([seed, i])
        x0s.append(rng.uniform(0.0, TWO_PI, 2 * n + k - 1))
    tasks = [lambda x0=x0: bfgs_descent(reduced, x0, tol, max_iter) for x0 in x0s]
    results = _run_starts(tasks, threads)
    values = [r.value for r in results]
    i = int(np.argmin(values))
    theta = np.mod(np.concatenate([[0.0], results[i].x]), TWO_PI)
    best = float(values[i])
    return SetDistanceReport(
        n=n, k=k, weight=g.spec, best_distance_sq=best, witness_sq=witness,
        ratio=math.sqrt(max(best, 0.0) / witness), passed=bool(best <= witness * (1 + 1e-9) + 1e-12),
        converged_fraction=float(np.mean([r.converged for r in results])),
        h1=[float(t) for t in theta[:n]], h2=[float(t) for t in theta[n:]], seed=seed, starts=len(x0s),
    )
