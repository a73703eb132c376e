"""Squared norms in ``A^2_(g)`` by four independent routes.

* ``gram``: ``kappa [N phi(0) + Σ_{j != k} phi(theta_j - theta_k)]``.
* ``quadrature``: the defining area integral, done in polar coordinates.
* ``taylor``: ``kappa Σ |a_s|^2 c_s`` from Taylor coefficients.
* ``radial``: the one-dimensional formula for equispaced poles.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from . import quadrature as quad
from ._backend import kernels
from .errors import CapacityError, DomainError
from .fractions import PoleConfiguration, SimplestFraction, taylor_coefficients
from .weights import Weight, interaction_kernel, moment_coefficients

TWO_PI = 2.0 * math.pi
METHODS = ("GramSeries", "TaylorSum", "Quadrature2D", "Radial1D")
PSI_N_CAP = 10 ** 6

# boundary band of the area quadrature: 1 - r^2 < BAND is handled analytically
BAND = 1e-12


@dataclass(frozen=True)
class NormResult:
    value_sq: float
    method: str
    error_estimate: float

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method}")

    @property
    def value(self) -> float:
        return math.sqrt(max(self.value_sq, 0.0))

    def to_dict(self):
        return asdict(self)


def _config(c) -> PoleConfiguration:
    if isinstance(c, SimplestFraction):
        return c.poles
    return c


def norm_sq_gram(c, g: Weight) -> NormResult:
    """Exact squared norm from pairwise kernel values; coincident poles allowed."""
    c = _config(c)
    ker = interaction_kernel(g)
    energy, _ = ker.pair_sums(c.angles, want_grad=False)
    kappa = g.kappa
    err = kappa * c.N * c.N * ker.error_estimate + 1e-15 * abs(kappa * energy)
    return NormResult(max(kappa * energy, 0.0), "GramSeries", err)


# --------------------------------------------------------------------------
# area quadrature
# --------------------------------------------------------------------------

def _local_panels(angles: np.ndarray, d: float, ratio: float = 3.0):
    """Panels owned by each pole, in coordinates relative to that pole.

    Pole ``p`` owns the arc from the midpoint with its left neighbour to the
    midpoint with its right neighbour; inside it the panel edges are
    ``0, ±d, ±ratio d, ...``.  Returns ``(owner, lo, hi)`` per panel.
    """
    order = np.argsort(angles)
    a = angles[order]
    n = len(a)
    gaps = np.diff(np.concatenate([a, [a[0] + TWO_PI]])) if n > 1 else np.array([TWO_PI])
    right = 0.5 * gaps
    left = 0.5 * np.roll(gaps, 1)
    owners, los, his = [], [], []
    m = max(1, int(math.ceil(math.log(math.pi / d) / math.log(ratio))) + 1)
    steps = d * ratio ** np.arange(m)
    for i in range(n):
        for side, limit in ((1.0, right[i]), (-1.0, left[i])):
            if limit <= 0.0:
                continue
            e = np.concatenate([[0.0], steps[steps < limit], [limit]])
            owners.append(np.full(len(e) - 1, order[i]))
            lo, hi = side * e[:-1], side * e[1:]
            los.append(np.minimum(lo, hi))
            his.append(np.maximum(lo, hi))
    return np.concatenate(owners), np.concatenate(los), np.concatenate(his)


def circle_means_sq(c: PoleConfiguration, v, order: int = 16) -> np.ndarray:
    """Circle means ``(1/2 pi) ∫ |h(r e^{i theta})|^2 d theta`` at ``r = sqrt(1 - v)``.

    Each pole's arc carries Gauss-Legendre panels graded toward the pole at
    scale ``d = 1 - r``.  Node offsets and ``d`` are kept exact, which keeps
    full accuracy even for ``d ~ 1e-13``.
    """
    angles = np.ascontiguousarray(c.angles)
    x, w = quad.gauss_legendre(order)
    v = np.asarray(v, dtype=float)
    out = np.empty(len(v))
    for i, vi in enumerate(v):
        d = vi / (1.0 + math.sqrt(1.0 - vi))          # 1 - sqrt(1 - v) without cancellation
        owner, lo, hi = _local_panels(angles, max(d, 1e-300))
        half = 0.5 * (hi - lo)[:, None]
        xs = (0.5 * (hi + lo)[:, None] + half * x).ravel()
        ws = (half * w).ravel()
        own = np.ascontiguousarray(np.repeat(owner, order), dtype=np.intp)
        vals = kernels.local_sq_sum(angles, own, np.ascontiguousarray(xs), d)
        out[i] = float(np.dot(ws, vals)) / TWO_PI
    return out


def _coincident_pairs(c: PoleConfiguration, tol: float = 1e-9) -> int:
    d = np.abs(np.angle(np.exp(1j * (c.angles[:, None] - c.angles[None, :]))))
    return int(np.sum(d < tol)) - c.N


def _area_integral(c, weights, radial_order, angular_order):
    bps = sorted({b for g in weights for b in g.breakpoints})
    v, wv = quad.graded_rule(bps, u_min=BAND, ratio=2.0, order=radial_order)
    means = circle_means_sq(c, v, angular_order)
    return [float(np.dot(wv * g(v), means)) for g in weights]


def norm_sq_quadrature(c, g, *, band: float = BAND):
    """Squared norm from the defining area integral.

    With ``v = 1 - r^2`` the norm is ``kappa ∫_0^1 m(v) g(v) dv`` where ``m`` is
    the circle mean of ``|h|^2``.  The band ``v < 1e-12`` is added
    analytically: there each kernel contributes ``∫ g(v)/v dv`` and the cross
    terms of distinct poles are bounded and absorbed into the error estimate.

    ``g`` may be one weight or a sequence of weights; the expensive circle
    means are shared.
    """
    c = _config(c)
    single = isinstance(g, Weight)
    weights = [g] if single else list(g)
    if band != BAND:
        raise DomainError("only the default band is supported")
    fine = _area_integral(c, weights, 12, 16)
    coarse = _area_integral(c, weights, 9, 12)
    diag = c.N + _coincident_pairs(c)
    sep = np.abs(np.angle(np.exp(1j * (c.angles[:, None] - c.angles[None, :]))))
    sep = sep[(sep > 1e-9)]
    cross_bound = float(np.sum(1.0 / (2.0 * np.sin(0.5 * sep)))) if sep.size else 0.0
    results = []
    for weight, f, cr in zip(weights, fine, coarse):
        kappa = weight.kappa
        g_band = float(np.max(weight(np.array([band, band / 2, band / 10]))))
        tail = diag * weight.log_tail(band)
        val = kappa * (f + tail)
        err = kappa * (abs(f - cr) + cross_bound * band * g_band) + 1e-14 * val
        results.append(NormResult(val, "Quadrature2D", err))
    return results[0] if single else results


# --------------------------------------------------------------------------
# Taylor coefficients
# --------------------------------------------------------------------------

def norm_sq_taylor(a, g: Weight, K: int | None = None, coef_bound: float | None = None) -> NormResult:
    """``kappa Σ_{s<=K} |a_s|^2 c_s`` plus a tail estimate.

    ``coef_bound`` bounds ``|a_s|`` for ``s > K`` (``N`` for an ``N``-pole
    simplest fraction); the tail is then at most ``coef_bound^2 kappa Σ_{s>K} c_s``.
    Without it the tail is taken as zero (polynomial input).
    """
    a = np.asarray(a, dtype=complex)
    if K is None:
        K = len(a) - 1
    a = a[:K + 1]
    mc = moment_coefficients(g, max(K, 0))
    kappa = g.kappa
    value = kappa * float(np.dot(np.abs(a) ** 2, mc.values[:len(a)]))
    err = 0.0
    if coef_bound is not None:
        err = coef_bound ** 2 * kappa * mc.tail_bound
        value += 0.5 * err
        err *= 0.5
    return NormResult(value, "TaylorSum", err + 1e-15 * value)


def norm_sq_taylor_fraction(h, g: Weight, K: int = 4096) -> NormResult:
    c = _config(h)
    return norm_sq_taylor(taylor_coefficients(SimplestFraction(c), K), g, K, coef_bound=c.N)


# --------------------------------------------------------------------------
# equispaced poles
# --------------------------------------------------------------------------

def _psi_integrand(v, N):
    lp = np.log1p(-v)
    return N * N * np.exp((N - 1) * lp) / -np.expm1(N * lp)


def psi_norm_sq(N: int, g: Weight) -> NormResult:
    """``||Psi_N||^2 = kappa N^2 ∫_0^1 (1-v)^{N-1} g(v) / (1 - (1-v)^N) dv``.

    Exact for every ``N`` (the angular integral is done in closed form).
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    if N > PSI_N_CAP:
        raise CapacityError(f"N = {N} exceeds the radial mesh cap {PSI_N_CAP}")
    kappa = g.kappa
    bps = tuple(g.breakpoints) + (1.0 / N, 10.0 / N, 0.1 / N)

    def run(order, ratio):
        v, w = quad.graded_rule(bps, ratio=ratio, order=order)
        return float(np.dot(w * g(v), _psi_integrand(v, N)))

    fine = run(24, 2.0)
    coarse = run(16, 3.0)
    tail = N * g.log_tail(quad.U_MIN)
    val = kappa * (fine + tail)
    return NormResult(val, "Radial1D", kappa * abs(fine - coarse) + 1e-15 * val)


def psi_norm_sq_many(Ns: Sequence[int], g: Weight) -> np.ndarray:
    return np.array([psi_norm_sq(int(n), g).value_sq for n in Ns])


def norm_sq(c, g: Weight, method: str = "gram", K: int = 4096) -> NormResult:
    """Dispatch by short method name: gram, quad, taylor, radial."""
    c = _config(c)
    if method == "gram":
        return norm_sq_gram(c, g)
    if method == "quad":
        return norm_sq_quadrature(c, g)
    if method == "taylor":
        return norm_sq_taylor_fraction(c, g, K)
    if method == "radial":
        if c.distance_to_equispaced() > 1e-12:
            raise DomainError("the radial formula needs equispaced poles")
        return psi_norm_sq(c.N, g)
    raise DomainError(f"unknown method {method!r}")
