"""Radial weights ``g`` on ``[0, 1]`` and the pairwise interaction kernel.

A weight ``g`` defines the space ``A^2_(g)`` with norm

    ||f||^2 = kappa_g * ∫_D |f(z)|^2 g(1 - |z|^2) dm_2(z),   kappa_g = 1 / ∫_0^1 g.

Its moments ``c_k = ∫_0^1 t^k g(1 - t) dt`` are the diagonal Gram entries of
the monomials, and the cosine series ``phi(t) = Σ_k c_k cos((k+1) t)`` is the
real inner product of two unit-pole Cauchy kernels at angular separation
``t`` (divided by ``kappa_g``).

Two independent evaluation routes for ``phi`` are provided:

* ``integral``: ``phi(t) = Re ∫_0^1 e^{it} / (1 - s e^{it}) g(1 - s) ds`` on a
  graded Gauss-Legendre rule in ``u = 1 - s``.  Valid for every ``t``,
  including ``t = 0`` where it reduces to ``∫_0^1 g(u)/u du``.
* ``series``: the cosine series with a summation-by-parts tail.

Integer powers ``g(t) = t^n`` additionally get an exact closed form built from
``log(1 - e^{it})`` (partial fractions of the moments); it is what makes Gram
sums with hundreds of poles cheap.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np
from scipy import special

from . import quadrature as quad
from ._backend import kernels
from .errors import DivergenceError, DomainError, QuadratureError

TWO_PI = 2.0 * math.pi
#: Angular separations below this are treated as coincident poles.
COINCIDENT = 1e-15


# --------------------------------------------------------------------------
# weight families
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    """Base class; subclasses implement ``__call__`` and ``derivative``."""

    def __call__(self, u):
        raise NotImplementedError

    def derivative(self, u):
        raise NotImplementedError

    @property
    def family(self) -> str:
        raise NotImplementedError

    @property
    def spec(self) -> str:
        """Round-trippable string accepted by :func:`parse_weight`."""
        raise NotImplementedError

    @property
    def breakpoints(self) -> tuple:
        """Interior points of ``(0, 1)`` where ``g`` is not smooth."""
        return ()

    @cached_property
    def kappa(self) -> float:
        edges = [0.0, *self.breakpoints, 1.0]
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            total += quad.adaptive(lambda u: float(self(u)), a, b, epsrel=1e-13)[0]
        if not total > 0:
            raise DomainError("weight integrates to zero")
        return 1.0 / total

    def log_tail(self, x: float) -> float:
        """``∫_0^x g(u)/u du`` (``inf`` when the integral diverges)."""
        return quad.adaptive(lambda u: float(self(u)) / u, 0.0, x, epsrel=1e-12)[0]

    @property
    def kernel_integrable(self) -> bool:
        """Whether ``∫_0 g(s)/s ds < ∞``, i.e. Cauchy kernels lie in the space."""
        return True

    @property
    def is_concave_nondecreasing(self) -> bool:
        return False

    @property
    def vanishes_at_zero(self) -> bool:
        return float(self(0.0)) == 0.0

    @property
    def satisfies_minimality_hypotheses(self) -> bool:
        """Concave, non-decreasing, ``g(0) = 0`` and kernel-integrable."""
        return (self.is_concave_nondecreasing and self.vanishes_at_zero
                and self.kernel_integrable)

    def __str__(self):
        return self.spec


@dataclass(frozen=True)
class PowerAlpha(Weight):
    """``g(t) = t^alpha`` (the standard spaces ``A^2_alpha``)."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be > 0, got {self.alpha}")

    def __call__(self, u):
        return np.power(u, self.alpha)

    def derivative(self, u):
        return self.alpha * np.power(u, self.alpha - 1.0)

    family = property(lambda self: "alpha")
    spec = property(lambda self: f"alpha:{self.alpha:g}")

    @cached_property
    def kappa(self) -> float:
        return self.alpha + 1.0

    def log_tail(self, x):
        return x ** self.alpha / self.alpha

    @property
    def is_concave_nondecreasing(self):
        return self.alpha <= 1.0

    @property
    def integer_alpha(self):
        """``alpha`` as an int when it is a small integer, else ``None``."""
        n = round(self.alpha)
        return n if n == self.alpha and 1 <= n <= 8 else None


@dataclass(frozen=True)
class LogPower(Weight):
    """``g(t) = log^{-q}(2/t)``, ``q > 1``."""

    q: float

    def __post_init__(self):
        if not self.q > 1:
            raise DomainError(f"logpow needs q > 1 (kernel not integrable otherwise), got {self.q}")

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            out = np.power(np.log(2.0 / u), -self.q)
        return np.where(u > 0, out, 0.0) if out.ndim else (out if u > 0 else 0.0)

    def derivative(self, u):
        L = np.log(2.0 / np.asarray(u, dtype=float))
        return self.q * np.power(L, -self.q - 1.0) / u

    family = property(lambda self: "logpow")
    spec = property(lambda self: f"logpow:{self.q:g}")

    def log_tail(self, x):
        return math.log(2.0 / x) ** (1.0 - self.q) / (self.q - 1.0)


@dataclass(frozen=True)
class ExpPower(Weight):
    """``g(t) = exp(-t^{-q})``, ``q > 0``."""

    q: float

    def __post_init__(self):
        if not self.q > 0:
            raise DomainError(f"exppow needs q > 0, got {self.q}")

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            out = np.exp(-np.power(u, -self.q))
        return out if out.ndim else float(out)

    def derivative(self, u):
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            v = np.power(u, -self.q)
            out = self.q * v / u * np.exp(-v)
        return np.nan_to_num(out, nan=0.0, posinf=0.0)

    family = property(lambda self: "exppow")
    spec = property(lambda self: f"exppow:{self.q:g}")

    def log_tail(self, x):
        return float(special.exp1(x ** -self.q)) / self.q


@dataclass(frozen=True)
class MinDelta(Weight):
    """``g(t) = min(delta, t)``: concave, non-decreasing, ``g(0) = 0``."""

    delta: float

    def __post_init__(self):
        if not 0 < self.delta <= 1:
            raise DomainError(f"delta must lie in (0, 1], got {self.delta}")

    def __call__(self, u):
        return np.minimum(u, self.delta)

    def derivative(self, u):
        return np.where(np.asarray(u) < self.delta, 1.0, 0.0)

    family = property(lambda self: "mindelta")
    spec = property(lambda self: f"mindelta:{self.delta:g}")

    @property
    def breakpoints(self):
        return (self.delta,) if self.delta < 1 else ()

    @cached_property
    def kappa(self):
        return 1.0 / (self.delta - 0.5 * self.delta ** 2)

    def log_tail(self, x):
        d = self.delta
        return x if x <= d else d + d * math.log(x / d)

    @property
    def is_concave_nondecreasing(self):
        return True


@dataclass(frozen=True)
class Tabulated(Weight):
    """Piecewise-linear interpolation of samples ``(t_i, g_i)`` covering ``[0, 1]``."""

    grid: tuple
    values: tuple
    source: str = field(default="", compare=False)

    def __post_init__(self):
        t = np.asarray(self.grid, dtype=float)
        g = np.asarray(self.values, dtype=float)
        if t.shape != g.shape or t.ndim != 1 or len(t) < 2:
            raise DomainError("tabulated weight needs matching 1-D grid and values")
        if t[0] != 0.0 or t[-1] != 1.0 or np.any(np.diff(t) <= 0):
            raise DomainError("tabulated grid must increase strictly from 0 to 1")
        if np.any(g < 0) or not np.any(g > 0):
            raise DomainError("tabulated weight must be >= 0 and not identically 0")

    @classmethod
    def from_csv(cls, path) -> "Tabulated":
        rows = []
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if not row or not row[0].strip():
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError:
                    if rows:
                        raise
                    continue  # header line
        t, g = zip(*rows)
        return cls(tuple(t), tuple(g), source=str(path))

    def __call__(self, u):
        return np.interp(u, self.grid, self.values)

    def derivative(self, u):
        t = np.asarray(self.grid)
        slopes = np.diff(self.values) / np.diff(t)
        idx = np.clip(np.searchsorted(t, u, side="right") - 1, 0, len(slopes) - 1)
        return slopes[idx]

    family = property(lambda self: "table")
    spec = property(lambda self: f"table:{self.source or '<memory>'}")

    @property
    def breakpoints(self):
        return tuple(self.grid[1:-1])

    @cached_property
    def kappa(self):
        return 1.0 / float(np.trapezoid(self.values, self.grid))

    def log_tail(self, x):
        t = np.asarray(self.grid)
        g = np.asarray(self.values)
        if g[0] > 0:
            return math.inf
        total, lo = 0.0, 0.0
        for i in range(len(t) - 1):
            if lo >= x:
                break
            hi = min(t[i + 1], x)
            b = (g[i + 1] - g[i]) / (t[i + 1] - t[i])
            a = g[i] - b * t[i]
            total += b * (hi - lo) + (a * math.log(hi / lo) if lo > 0 else 0.0)
            lo = hi
        return total

    @property
    def kernel_integrable(self):
        return self.values[0] == 0.0

    @property
    def is_concave_nondecreasing(self):
        slopes = np.diff(self.values) / np.diff(self.grid)
        return bool(np.all(slopes >= 0) and np.all(np.diff(slopes) <= 1e-12 * (1 + np.abs(slopes[:-1]))))


def parse_weight(text: str) -> Weight:
    """Parse ``alpha:1.0 | logpow:2 | exppow:0.5 | mindelta:0.3 | table:<csv>``."""
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    if not arg:
        raise DomainError(f"weight spec {text!r} needs a parameter")
    if kind in ("alpha", "pow", "power"):
        return PowerAlpha(float(arg))
    if kind in ("logpow", "log"):
        return LogPower(float(arg))
    if kind in ("exppow", "exp"):
        return ExpPower(float(arg))
    if kind in ("mindelta", "min"):
        return MinDelta(float(arg))
    if kind in ("table", "csv"):
        return Tabulated.from_csv(Path(arg))
    raise DomainError(f"unknown weight family {kind!r}")


# --------------------------------------------------------------------------
# moments
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentCoefficients:
    """``c_0 .. c_K`` together with the exact remainder ``Σ_{k>K} c_k``."""

    g: Weight
    values: np.ndarray
    truncation_K: int
    tail_bound: float


def moment_coefficient(g: Weight, k: int) -> float:
    """``c_{g,k} = ∫_0^1 t^k g(1-t) dt``.

    Exact Beta value for ``t^alpha``; adaptive Gauss-Kronrod (relative
    tolerance 1e-10) otherwise.
    """
    if k < 0:
        raise DomainError("k must be >= 0")
    if isinstance(g, PowerAlpha):
        a = g.alpha
        return math.exp(math.lgamma(k + 1) + math.lgamma(a + 1) - math.lgamma(k + a + 2))
    # substitute u = 1 - t; mass concentrates in u < 1/(k+1)
    pts = sorted({*g.breakpoints, *(m / (k + 1.0) for m in (1, 10, 50) if m < k + 1)})
    edges = [0.0, *pts, 1.0]
    total = err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = quad.adaptive(lambda u: (1.0 - u) ** k * float(g(u)), a, b, epsrel=1e-10)
        total += v
        err += e
    if err > 1e-10 * abs(total) + 1e-300:
        raise QuadratureError(f"moment c_{k} did not reach 1e-10", err / abs(total))
    return total


@lru_cache(maxsize=32)
def moment_coefficients(g: Weight, K: int) -> MomentCoefficients:
    """All moments ``c_0 .. c_K`` (recursion for powers, graded rule otherwise)."""
    if K < 0:
        raise DomainError("K must be >= 0")
    ks = np.arange(K + 1, dtype=float)
    if isinstance(g, PowerAlpha):
        a = g.alpha
        ratios = np.concatenate([[1.0 / (a + 1.0)], ks[1:] / (ks[1:] + a + 1.0)])
        vals = np.cumprod(ratios)
        # sum_{k>K} B(k+1, a+1) = B(K+2, a)
        tail = math.exp(math.lgamma(K + 2) + math.lgamma(a) - math.lgamma(K + 2 + a))
    else:
        u, w = quad.graded_rule(g.breakpoints, order=24, ratio=2.0)
        wg = w * g(u)
        logs = np.log1p(-u)
        vals = np.empty(K + 1)
        for lo in range(0, K + 1, 512):
            kk = ks[lo:lo + 512, None]
            vals[lo:lo + 512] = np.exp(kk * logs) @ wg
        tail = float(np.exp((K + 1) * logs) @ (wg / u)) + g.log_tail(quad.U_MIN)
    vals.setflags(write=False)
    return MomentCoefficients(g, vals, K, tail)


# --------------------------------------------------------------------------
# interaction kernel phi
# --------------------------------------------------------------------------

def _reduce(t):
    """Map angles to ``[0, pi]`` (phi is even) and return the sign for odd derivatives."""
    t = np.asarray(t, dtype=float)
    # symmetric reduction keeps tiny separations of either sign exact
    r = t - TWO_PI * np.round(t / TWO_PI)
    return np.abs(r), np.where(r < 0.0, -1.0, 1.0)


class InteractionKernel:
    """Evaluator for ``phi_g`` and its first two derivatives.

    ``kind`` is ``"binomial"`` (closed form, integer powers) or
    ``"quadrature"``; ``params`` feeds the compiled pair-energy routines.
    """

    def __init__(self, g: Weight, force_quadrature: bool = False):
        if not g.kernel_integrable:
            raise DivergenceError(f"∫ g(s)/s ds diverges for {g}; Cauchy kernels are not in the space")
        self.g = g
        n = getattr(g, "integer_alpha", None)
        if n is not None and not force_quadrature:
            self.kind = "binomial"
            self.coeffs = np.array([(-1) ** j * math.comb(n, j) for j in range(n + 1)], dtype=float)
            self.phi0 = 1.0 / n
            self.error_estimate = 1e-14
            # coefficient of cos(k t) in the trigonometric part of the closed form
            self.poly = np.array([sum(self.coeffs[j] / (j - k) for j in range(k + 1, n + 1))
                                  for k in range(n)], dtype=float)
        else:
            self.kind = "quadrature"
            u, w = quad.graded_rule(g.breakpoints)
            self.u = u
            self.s = 1.0 - u
            self.w = w * g(u)
            self.phi0 = float(np.sum(self.w / u)) + g.log_tail(quad.U_MIN)
            self.error_estimate = self._estimate_rule_error()

    # -- quadrature route -------------------------------------------------
    def _quad_eval(self, tau, order, u=None, s=None, w=None):
        u = self.u if u is None else u
        s = self.s if s is None else s
        w = self.w if w is None else w
        out = np.empty(tau.shape)
        flat_t, flat_o = tau.ravel(), out.ravel()
        step = max(1, 2_000_000 // len(u))
        for lo in range(0, len(flat_t), step):
            t = flat_t[lo:lo + step, None]
            z = np.exp(1j * t)
            hs = np.sin(0.5 * t)
            d = u + s * (2.0 * hs * hs - 1j * np.sin(t))  # 1 - s e^{it}
            if order == 0:
                val = (z / d).real @ w
            elif order == 1:
                val = (1j * z / (d * d)).real @ w
            else:
                val = -(z * (1.0 + s * z) / (d * d * d)).real @ w
            flat_o[lo:lo + step] = val
        return out

    def _estimate_rule_error(self):
        """Compare against a rule of lower order at a few separations."""
        u, w = quad.graded_rule(self.g.breakpoints, order=14)
        w = w * self.g(u)
        tau = np.array([1e-6, 1e-3, 0.1, 1.0, 3.0])
        fine = self._quad_eval(tau, 0)
        coarse = self._quad_eval(tau, 0, u, 1.0 - u, w)
        return float(np.max(np.abs(fine - coarse))) + 1e-15

    # -- closed form for t^n ---------------------------------------------
    def _binomial_eval(self, tau, order):
        # phi = Re[(1 - e^{-it})^n L(t) - Q(t)], L = -log(1 - e^{it}), Q a trig polynomial
        n = len(self.coeffs) - 1
        with np.errstate(divide="ignore", invalid="ignore"):
            L = -np.log(2.0 * np.sin(0.5 * tau)) + 0.5j * (math.pi - tau)
            em = np.exp(-1j * tau)
            hs = np.sin(0.5 * tau)
            y = 2.0 * hs * hs + 1j * np.sin(tau)             # 1 - e^{-it}, no cancellation
            y1 = 1j * em
            if order == 0:
                head = y ** n * L
            else:
                q = 0.5 * (-1.0 + 1j / np.tan(0.5 * tau))      # e^{it}/(1-e^{it})
                Lp = 1j * q
                E0 = y ** n
                E1 = n * y ** (n - 1) * y1
                if order == 1:
                    head = E1 * L + E0 * Lp
                else:
                    Lpp = -q * q * em
                    E2 = n * (n - 1) * y ** (n - 2) * y1 * y1 + n * y ** (n - 1) * em if n > 1 \
                        else n * em
                    head = E2 * L + 2.0 * E1 * Lp + E0 * Lpp
        poly = np.zeros(tau.shape, dtype=complex)
        for j, bj in enumerate(self.coeffs):
            for m in range(1, j + 1):
                k = m - j
                poly += bj / m * (1j * k) ** order * np.exp(1j * k * tau)
        return (head - poly).real

    # -- public -----------------------------------------------------------
    def value(self, t):
        """``phi(t)``; coincident separations give ``phi(0)``."""
        tau, _ = _reduce(t)
        small = tau < COINCIDENT
        tt = np.where(small, 1.0, tau)
        v = self._binomial_eval(tt, 0) if self.kind == "binomial" else self._quad_eval(tt, 0)
        return np.where(small, self.phi0, v)

    def derivative(self, t):
        """``phi'(t)``; defined as 0 at coincident separations (odd function)."""
        tau, sign = _reduce(t)
        small = tau < COINCIDENT
        tt = np.where(small, 1.0, tau)
        v = self._binomial_eval(tt, 1) if self.kind == "binomial" else self._quad_eval(tt, 1)
        return np.where(small, 0.0, sign * v)

    def pair_sums(self, theta, charge=None, want_grad=True):
        """``(Σ_jk q_j q_k phi(theta_j - theta_k), gradient)``; unit charges by default.

        The diagonal contributes ``q_j^2 phi(0)``.  Multiply by ``kappa`` for norms.
        """
        theta = np.ascontiguousarray(theta, dtype=float)
        if charge is None:
            charge = np.ones(len(theta))
        charge = np.ascontiguousarray(charge, dtype=float)
        if self.kind == "binomial":
            return kernels.pair_sums_binom(theta, charge, self.poly, len(self.coeffs) - 1,
                                           self.phi0, want_grad)
        return kernels.pair_sums_quad(theta, charge, self.u, self.s, self.w, self.phi0, want_grad)

    def second_derivative(self, t):
        """``phi''(t)`` for ``t`` not a multiple of ``2 pi``."""
        tau, _ = _reduce(t)
        if np.any(tau < COINCIDENT):
            raise DomainError("phi'' is only defined on (0, 2 pi)")
        return self._binomial_eval(tau, 2) if self.kind == "binomial" else self._quad_eval(tau, 2)


@lru_cache(maxsize=32)
def interaction_kernel(g: Weight, force_quadrature: bool = False) -> InteractionKernel:
    return InteractionKernel(g, force_quadrature)


def _scalar_or_array(x, like):
    return float(x) if np.ndim(like) == 0 else x


def phi(g: Weight, t, K: int | None = None, method: str = "integral"):
    """``phi_g(t)``.

    ``method="integral"`` (default) uses the closed integral form, valid for
    every ``t``.  ``method="series"`` sums the cosine series up to ``K`` (default
    4096) and adds a summation-by-parts tail; at ``t ≡ 0`` it adds the exact
    remainder ``Σ_{k>K} c_k`` instead.
    """
    if method == "integral":
        return _scalar_or_array(interaction_kernel(g).value(t), t)
    if method == "series":
        return _scalar_or_array(phi_series(g, t, K or 4096)[0], t)
    raise DomainError(f"unknown method {method!r}")


def phi_series(g: Weight, t, K: int = 4096, levels: int = 6):
    """Cosine-series route; returns ``(value, error_estimate)`` arrays.

    The tail ``Σ_{k>=K} c_k z^k`` (``z = e^{it}``) is rewritten by repeated
    summation by parts, ``T[c] = c_K z^K/(1-z) - z/(1-z) T[Δc]``; each level
    gains a factor ``~ levels / (K |2 sin(t/2)|)``.
    """
    if not g.kernel_integrable:
        raise DivergenceError(f"phi_g(0) diverges for {g}")
    mc = moment_coefficients(g, K + levels)
    c = np.asarray(mc.values)
    tau, _ = _reduce(t)
    tau = np.atleast_1d(tau)
    head = c[:K]
    k1 = np.arange(1, K + 1)
    out = np.empty(tau.shape)
    err = np.empty(tau.shape)
    for i, tt in enumerate(tau.ravel()):
        if tt < COINCIDENT:
            # tail_bound covers k > K + levels
            out.flat[i] = head.sum() + c[K:].sum() + mc.tail_bound
            err.flat[i] = 1e-15 * out.flat[i]
            continue
        z = complex(math.cos(tt), math.sin(tt))
        partial = complex(np.dot(head, np.exp(1j * k1 * tt)))   # Σ_{k<K} c_k z^{k+1}
        ratio = -z / (1.0 - z)
        diff = c[K:].copy()
        tail = 0j
        term = 0j
        for p in range(levels):
            term = diff[0] * z ** K / (1.0 - z) * ratio ** p
            tail += term
            diff = diff[:-1] - diff[1:]
        out.flat[i] = (partial + z * tail).real
        err.flat[i] = abs(term)
    shape = np.shape(t)
    return out.reshape(shape), err.reshape(shape)


def phi_derivative(g: Weight, t):
    """``phi_g'(t)`` (integral form differentiated under the integral sign)."""
    return _scalar_or_array(interaction_kernel(g).derivative(t), t)


def phi_second_derivative(g: Weight, t):
    """``phi_g''(t)`` on ``(0, 2 pi)`` from the ``g'``-weighted integral

        phi''(t) = ∫_0^1 s (2s - (1+s^2) cos t) / (1 + s^2 - 2 s cos t)^2 g'(1-s) ds.

    The piece ``u = 1 - s < U_MIN`` is added as ``h_t(1) * (g(U_MIN) - g(0))``.
    """
    tau, _ = _reduce(t)
    if np.any(tau < COINCIDENT):
        raise DomainError("phi'' is only defined on (0, 2 pi)")
    u, w = _gprime_rule(g)
    wg = w * g.derivative(u)
    s = 1.0 - u
    tt = np.atleast_1d(tau).ravel()
    out = np.empty(tt.shape)
    step = max(1, 2_000_000 // len(u))
    for lo in range(0, len(tt), step):
        x = tt[lo:lo + step, None]
        a = 4.0 * np.sin(0.5 * x) ** 2          # 2 - 2 cos t
        num = s * (s * a - u * u * np.cos(x))
        den = u * u + s * a
        val = (num / (den * den)) @ wg
        h1 = 1.0 / a[:, 0]
        out[lo:lo + step] = val + h1 * (float(g(quad.U_MIN)) - float(g(0.0)))
    return _scalar_or_array(out.reshape(np.shape(tau)), t)


@lru_cache(maxsize=32)
def _gprime_rule(g):
    return quad.graded_rule(g.breakpoints)


# --------------------------------------------------------------------------
# diagnostics
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvexityReport:
    weight: str
    grid_size: int
    min_value: float
    argmin: float
    all_positive: bool

    def to_dict(self):
        return dict(weight=self.weight, grid_size=self.grid_size, min_value=self.min_value,
                    argmin=self.argmin, all_positive=self.all_positive)


def check_strict_convexity(g: Weight, grid_size: int = 10_000) -> ConvexityReport:
    """Evaluate ``phi''`` on the uniform interior grid ``2 pi i/(n+1)``, ``i = 1..n``."""
    if grid_size < 100:
        raise DomainError("grid_size must be >= 100")
    t = TWO_PI * np.arange(1, grid_size + 1) / (grid_size + 1)
    vals = np.asarray(phi_second_derivative(g, t))
    i = int(np.argmin(vals))
    return ConvexityReport(g.spec, grid_size, float(vals[i]), float(t[i]), bool(np.all(vals > 0)))


def dyadic_shells(func, m_max: int = 200) -> np.ndarray:
    """``∫_{2^{-m-1}}^{2^{-m}} func(s)/s ds`` for ``m = 1 .. m_max``."""
    x, w = quad.gauss_legendre(16)
    # in v = log s each shell has length log 2 and integrand func(e^v)
    out = np.empty(m_max)
    for m in range(1, m_max + 1):
        lo = -(m + 1) * math.log(2.0)
        v = lo + 0.5 * math.log(2.0) * (x + 1.0)
        out[m - 1] = 0.5 * math.log(2.0) * float(np.dot(w, func(np.exp(v))))
    return out


def dyadic_shell_test(func, m_max: int = 200) -> bool:
    """Heuristic convergence test for ``∫_0 func(s)/s ds``.

    Summable if the shell integrals decay geometrically or like ``m^{-p}`` with
    ``p > 1.1`` over the last half of the shells.
    """
    shells = dyadic_shells(func, m_max)
    if np.all(shells[m_max // 2:] == 0):
        return True
    a, b = shells[m_max // 2 - 1], shells[-1]
    if not (a > 0 and b >= 0):
        return False
    if b == 0 or b / a < 1e-6:
        return True
    p = -math.log(b / a) / math.log(m_max / (m_max // 2))
    return p > 1.1


def check_kernel_integrability(g) -> bool:
    """``∫_0^{1/2} g(s)/s ds < ∞``; analytic for built-in families."""
    if isinstance(g, (PowerAlpha, LogPower, ExpPower, MinDelta, Tabulated)):
        return g.kernel_integrable
    return dyadic_shell_test(g)
