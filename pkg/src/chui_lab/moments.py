"""Power sums of unimodular numbers, the Fejér kernel, and the annulus energy
that lower-bounds norms of simplest fractions."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import quadrature as quad
from ._backend import kernels
from .errors import DomainError, QuadratureError
from .fractions import PoleConfiguration
from .norms import circle_means_sq

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class UnimodularFamily:
    """``b_k = e^{i angles_k}``."""

    angles: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float).ravel()
        if a.size == 0:
            raise DomainError("need at least one number")
        a.setflags(write=False)
        object.__setattr__(self, "angles", a)

    @property
    def N(self) -> int:
        return len(self.angles)

    @classmethod
    def roots_of_unity(cls, N: int):
        return cls(TWO_PI * np.arange(N) / N)

    @classmethod
    def random(cls, N: int, rng):
        return cls(rng.uniform(0.0, TWO_PI, N))

    @classmethod
    def clustered(cls, N: int, width: float, rng):
        """All angles within ``width`` of 0."""
        return cls(rng.uniform(-0.5 * width, 0.5 * width, N))

    @classmethod
    def near_duplicates(cls, N: int, rng, eps: float = 1e-9):
        """Pairs of almost equal angles."""
        base = rng.uniform(0.0, TWO_PI, (N + 1) // 2)
        return cls(np.concatenate([base, base + eps])[:N])


def adversarial_families(N: int, rng) -> list[UnimodularFamily]:
    """Fixed stress cases: all equal, tight cluster, near duplicates, two antipodal clumps."""
    half = N // 2
    return [
        UnimodularFamily(np.zeros(N)),
        UnimodularFamily.clustered(N, 1e-3, rng),
        UnimodularFamily.near_duplicates(N, rng),
        UnimodularFamily(np.concatenate([np.zeros(half), np.full(N - half, math.pi)])),
    ]


def power_sums(b: UnimodularFamily, J: int) -> np.ndarray:
    """``S_1..S_J`` with ``S_j = Σ_k b_k^j`` (iterated multiplication)."""
    if J < 1:
        raise DomainError("J must be >= 1")
    return kernels.power_sums(np.ascontiguousarray(b.angles), int(J))


def fejer_kernel(Mplus1: int, x):
    """``F_j(x) = (1/j) (sin(j x/2) / sin(x/2))^2`` with ``F_j(0) = j``."""
    if Mplus1 < 1:
        raise DomainError("Mplus1 must be >= 1")
    x = np.asarray(x, dtype=float)
    # reduce to [-pi, pi]: near 2 pi k the product j x / 2 would otherwise carry
    # a rounding error large compared with sin(j x / 2)
    x = x - TWO_PI * np.round(x / TWO_PI)
    s = np.sin(0.5 * x)
    small = np.abs(s) < 1e-8
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (np.sin(0.5 * Mplus1 * x) / s) ** 2 / Mplus1
    # near multiples of 2 pi use the cosine sum, which has no removable singularity
    if np.any(small):
        val = np.where(small, fejer_cosine_sum(Mplus1, x), val)
    return float(val) if val.ndim == 0 else val


def fejer_cosine_sum(Mplus1: int, x):
    """``Σ_{|j|<=M} (1 - |j|/(M+1)) e^{ijx}`` written as a real cosine sum."""
    x = np.asarray(x, dtype=float)
    j = np.arange(1, Mplus1)
    w = 1.0 - j / Mplus1
    out = 1.0 + 2.0 * (np.cos(np.multiply.outer(x, j)) @ w) if Mplus1 > 1 else np.ones_like(x)
    return float(out) if np.ndim(out) == 0 else out


@dataclass
class MomentCheck:
    N: int
    value: float
    floor: float
    passed: bool

    def to_dict(self):
        return asdict(self)


def fejer_weighted_bound(b: UnimodularFamily, M: int) -> tuple[float, float]:
    """``Σ_{j<=M} (1 - j/(M+1)) |S_j|^2`` and the floor ``N (M - N + 1) / 2``.

    The inequality between them is guaranteed when ``M >= N``.
    """
    if M < 1:
        raise DomainError("M must be >= 1")
    S = power_sums(b, M)
    j = np.arange(1, M + 1)
    weighted = float(np.dot(1.0 - j / (M + 1.0), np.abs(S) ** 2))
    return weighted, b.N * (M - b.N + 1) / 2.0


def moment_lower_bound_check(b: UnimodularFamily) -> MomentCheck:
    """``Σ_{j<=2N} |S_j|^2 >= N^2 / 2``."""
    N = b.N
    S = power_sums(b, 2 * N)
    total = float(np.sum(np.abs(S) ** 2))
    floor = N * N / 2.0
    return MomentCheck(N, total, floor, total >= floor)


@dataclass
class TrialSummary:
    N: int
    trials: int
    seed: int
    moment_all_pass: bool
    fejer_all_pass: bool
    min_moment_ratio: float       # min of Σ|S_j|^2 / N^2 (empirical delta)
    min_fejer_margin: float       # min of weighted - floor
    adversarial_pass: bool

    def to_dict(self):
        return asdict(self)


def random_trials(N: int, trials: int = 1000, seed: int = 0) -> TrialSummary:
    """Both inequalities over seeded random families (trial ``i`` uses ``[seed, N, i]``)
    plus the adversarial fixtures; ``M = 2N`` for the Fejér bound."""
    ratios = []
    margins = []
    for i in range(trials):
        b = UnimodularFamily.random(N, np.random.default_rng([seed, N, i]))
        m = moment_lower_bound_check(b)
        w, fl = fejer_weighted_bound(b, 2 * N)
        ratios.append(m.value / (N * N))
        margins.append(w - fl)
    adv_ok = True
    for b in adversarial_families(N, np.random.default_rng([seed, N, -1 % 2 ** 32])):
        w, fl = fejer_weighted_bound(b, 2 * N)
        adv_ok &= moment_lower_bound_check(b).passed and w >= fl
    return TrialSummary(N, trials, seed, bool(min(ratios) >= 0.5), bool(min(margins) >= 0),
                        float(min(ratios)), float(min(margins)), bool(adv_ok))


# --------------------------------------------------------------------------
# annulus energy
# --------------------------------------------------------------------------

@dataclass
class AnnulusEnergy:
    N: int
    value: float                  # ∫ over 1/N < 1 - |z|^2 < 2/N of |h|^2 dm_2
    taylor_proxy: float
    relative_difference: float
    per_pole: float               # value / N

    def to_dict(self):
        return asdict(self)


def annulus_energy(c: PoleConfiguration, rtol: float = 1e-6) -> AnnulusEnergy:
    """Energy of ``h`` on the band ``1/N < 1 - |z|^2 < 2/N``.

    Computed by polar quadrature and again from Taylor coefficients:
    ``Σ_s |S_{s+1}|^2 ∫ t^s dt`` over ``t = |z|^2`` in the band.  The two must
    agree to ``rtol``.
    """
    N = c.N
    if N < 2:
        raise DomainError("annulus energy needs N >= 2")
    v, w = quad.composite_gl(np.linspace(1.0 / N, 2.0 / N, 5), 16)
    value = float(np.dot(w, circle_means_sq(c, v)))
    t1, t2 = 1.0 - 2.0 / N, 1.0 - 1.0 / N
    # t2^s < 1e-18 once s > 41.5 N
    S = int(math.ceil(-math.log(1e-18) / -math.log(t2))) + 1
    P = np.abs(power_sums(UnimodularFamily(c.angles), S)) ** 2
    s1 = np.arange(1, S + 1)
    band = (np.power(t2, s1) - np.power(t1, s1)) / s1
    proxy = float(np.dot(P, band))
    rel = abs(value - proxy) / proxy
    if rel > rtol:
        raise QuadratureError("annulus quadrature and Taylor proxy disagree", rel)
    return AnnulusEnergy(N, value, proxy, rel, value / N)
