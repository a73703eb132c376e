"""Growth of ``||Psi_N||^2`` in ``A^2_(g)``: sharp limit for power weights,
two-integral comparability for general weights and the four rate regimes."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import quadrature as quad
from .errors import DomainError, UsageError
from .norms import psi_norm_sq
from .specfun import gamma, zeta
from .weights import ExpPower, LogPower, PowerAlpha, Weight

#: comparability is accepted when max/min of a normalized sequence stays below this
BAND_FACTOR = 3.0


def limit_constant(alpha: float) -> float:
    """``lim N^{alpha-1} ||Psi_N||^2_alpha = Γ(alpha+2) ζ(alpha+1)``."""
    if alpha <= 0:
        raise DomainError("alpha must be > 0")
    return gamma(alpha + 2.0) * zeta(alpha + 1.0)


def bose_integral(alpha: float) -> float:
    """``(alpha+1) ∫_0^∞ s^alpha / (e^s - 1) ds``, the same constant as an integral."""
    if alpha <= 0:
        raise DomainError("alpha must be > 0")
    f = lambda s: s ** alpha / math.expm1(s) if s > 0 else 0.0
    head, _ = quad.adaptive(f, 0.0, 1.0, epsrel=1e-13)
    tail, _ = quad.adaptive(f, 1.0, 60.0 + 3.0 * alpha, epsrel=1e-13)
    return (alpha + 1.0) * (head + tail)


@dataclass
class RateReport:
    name: str
    Ns: list
    values: list
    reference: object
    ratios: list
    monotone_increasing: bool
    passed: bool = True
    band: tuple = (math.nan, math.nan)
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if not len(self.Ns) == len(self.values) == len(self.ratios):
            raise ValueError("Ns, values and ratios must have equal length")

    @property
    def band_ratio(self) -> float:
        lo, hi = self.band
        return hi / lo if lo > 0 else math.inf

    def to_dict(self):
        out = asdict(self)
        out["band_ratio"] = self.band_ratio
        return out


def _strictly_increasing(x) -> bool:
    return bool(np.all(np.diff(np.asarray(x, dtype=float)) > 0))


def _check_Ns(Ns):
    Ns = [int(n) for n in Ns]
    if not Ns or Ns[0] < 1 or any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise DomainError("Ns must be a strictly increasing sequence of positive integers")
    return Ns


def scaled_norm_sequence(alpha: float, Ns: Sequence[int]) -> RateReport:
    """``N^{alpha-1} ||Psi_N||^2_alpha`` against the limit constant."""
    Ns = _check_Ns(Ns)
    g = PowerAlpha(alpha)
    ref = limit_constant(alpha)
    values = [n ** (alpha - 1.0) * psi_norm_sq(n, g).value_sq for n in Ns]
    ratios = [v / ref for v in values]
    mono = _strictly_increasing(values) if len(values) > 1 else True
    ok = mono and all(r < 1.0 for r in ratios)
    return RateReport("scaled_norm", Ns, values, ref, ratios, mono, ok,
                      (min(values), max(values)), {"alpha": alpha})


@dataclass
class TwoIntegralBracket:
    N: int
    lower_proxy: float      # N ∫_0^{1/N} g(t)/t dt
    upper_part: float       # N^2 ∫_{1/N}^1 (1-t)^N g(t) dt
    full: float             # their sum
    norm_sq: float
    ratio: float            # norm_sq / full

    def to_dict(self):
        return asdict(self)


def two_integral_bracket(g: Weight, N: int) -> TwoIntegralBracket:
    """The two-integral expression that is comparable to ``||Psi_N||^2``."""
    if N < 1:
        raise DomainError("N must be >= 1")
    # t = e^{-x} turns ∫_0^{1/N} g(t)/t dt into ∫_{log N}^∞ g(e^{-x}) dx
    lo = math.log(N)
    near, _ = quad.adaptive(lambda x: float(g(math.exp(-x))), lo, np.inf, epsrel=1e-10, epsabs=1e-300)
    if N > 1:
        pts = [p / N for p in (2.0, 10.0, 100.0)] + list(g.breakpoints)
        far, _ = quad.adaptive(lambda t: math.exp(N * math.log1p(-t)) * float(g(t)), 1.0 / N, 1.0,
                               epsrel=1e-10, epsabs=1e-300, points=pts)
    else:
        far = 0.0
    lower = N * near
    upper = N * N * far
    full = lower + upper
    ns = psi_norm_sq(N, g).value_sq
    return TwoIntegralBracket(N, lower, upper, full, ns, ns / full)


def bracket_sweep(g: Weight, Ns: Sequence[int]) -> RateReport:
    """``||Psi_N||^2 / (two-integral sum)`` across ``Ns``; passes if within a factor-3 band."""
    Ns = _check_Ns(Ns)
    rows = [two_integral_bracket(g, n) for n in Ns]
    ratios = [r.ratio for r in rows]
    band = (min(ratios), max(ratios))
    return RateReport("bracket", Ns, [r.norm_sq for r in rows], [r.full for r in rows], ratios,
                      _strictly_increasing([r.norm_sq for r in rows]), band[1] / band[0] < BAND_FACTOR,
                      band, {"weight": g.spec})


def _little_o_t(g: Weight) -> bool:
    if isinstance(g, PowerAlpha):
        return g.alpha > 1
    return isinstance(g, ExpPower)


def rate_regimes(case: str, g: Weight, Ns: Sequence[int]) -> RateReport:
    """Normalized ``||Psi_N||`` sequences for the four regimes.

    * ``A`` any admissible weight: ``||Psi_N|| / sqrt(N)`` decreases;
      ``c = max(-log ||Psi_N|| / N)`` is reported.
    * ``B`` ``g(t) = o(t)``: ``||Psi_N||^2`` decreases toward 0.
    * ``C`` ``log^{-q}(2/t)``: ``||Psi_N||^2 log^{q-1} N / N`` stays in a factor-3 band.
    * ``D`` ``exp(-t^{-q})``: ``log(1/||Psi_N||) / N^{q/(q+1)}`` stays in a factor-3 band.
    """
    case = case.upper()
    Ns = _check_Ns(Ns)
    if case == "B" and not _little_o_t(g):
        raise UsageError(f"case B needs g(t) = o(t); {g} does not qualify")
    if case == "C" and not isinstance(g, LogPower):
        raise UsageError("case C needs a logpow weight")
    if case == "D" and not isinstance(g, ExpPower):
        raise UsageError("case D needs an exppow weight")
    if case not in "ABCD" or len(case) != 1:
        raise UsageError(f"unknown case {case!r}")
    if case in "CD" and Ns[0] < 2:
        raise UsageError("cases C and D need N >= 2")
    sq = np.array([psi_norm_sq(n, g).value_sq for n in Ns])
    n = np.array(Ns, dtype=float)
    notes = {"weight": g.spec}
    if case == "A":
        values = np.sqrt(sq / n)
        passed = bool(np.all(np.diff(values) < 0))
        notes["c_measured"] = float(np.max(-0.5 * np.log(sq) / n))
    elif case == "B":
        values = sq
        passed = bool(np.all(np.diff(values) < 0))
    elif case == "C":
        values = sq * np.log(n) ** (g.q - 1.0) / n
        passed = values.max() / values.min() < BAND_FACTOR
    else:
        values = -0.5 * np.log(sq) / n ** (g.q / (g.q + 1.0))
        passed = bool(values.max() / values.min() < BAND_FACTOR and np.all(sq < 1))
        notes["log_norm"] = (0.5 * np.log(sq)).tolist()
    values = [float(v) for v in values]
    ref = values[-1]
    return RateReport(f"case_{case}", Ns, values, ref, [v / ref for v in values],
                      _strictly_increasing(values), bool(passed), (min(values), max(values)), notes)


def parse_Ns(text: str) -> list[int]:
    """``a:b`` (all integers), ``a:b:log`` (about ten per decade), ``a:b:geom``
    (doublings) or a comma-separated list."""
    text = text.strip()
    if "," in text or ":" not in text:
        return _check_Ns(int(x) for x in text.split(","))
    parts = text.split(":")
    lo, hi = int(parts[0]), int(parts[1])
    kind = parts[2] if len(parts) > 2 else "lin"
    if lo < 1 or hi < lo:
        raise DomainError(f"bad range {text!r}")
    if kind == "lin":
        return list(range(lo, hi + 1))
    if kind == "log":
        count = max(2, int(round(10 * math.log10(hi / lo))) + 1)
        return sorted({int(round(x)) for x in np.geomspace(lo, hi, count)})
    if kind == "geom":
        out = []
        n = lo
        while n <= hi:
            out.append(n)
            n *= 2
        return out
    raise DomainError(f"unknown range kind {kind!r}")
