"""Pole configurations on the unit circle and the simplest fractions they define.

A simplest fraction is ``h(z) = Σ_k 1/(z - e^{i theta_k})``; ``psi(N, z)`` is the
one with equispaced poles, ``N z^{N-1} / (z^N - 1)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._backend import kernels
from .errors import DomainError, PoleError

TWO_PI = 2.0 * math.pi
#: Evaluation closer than this to a pole raises :class:`PoleError`.
POLE_THRESHOLD = 1e-14


def _wrap(x):
    """Map angle differences to ``(-pi, pi]``."""
    return math.pi - np.mod(math.pi - np.asarray(x, dtype=float), TWO_PI)


@dataclass(frozen=True, eq=False)
class PoleConfiguration:
    """``N`` angles in ``[0, 2 pi)``; poles are ``e^{i angle}``."""

    angles: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float).ravel()
        if a.size == 0:
            raise DomainError("a pole configuration needs at least one angle")
        if not np.all(np.isfinite(a)):
            raise DomainError("angles must be finite")
        a = np.mod(a, TWO_PI)
        a = np.where(a >= TWO_PI, 0.0, a)
        a.setflags(write=False)
        object.__setattr__(self, "angles", a)

    @property
    def N(self) -> int:
        return len(self.angles)

    @property
    def poles(self) -> np.ndarray:
        return np.exp(1j * self.angles)

    @classmethod
    def equispaced(cls, N: int, offset: float = 0.0) -> "PoleConfiguration":
        if N < 1:
            raise DomainError("N must be >= 1")
        return cls(offset + TWO_PI * np.arange(N) / N)

    @classmethod
    def random(cls, N: int, rng) -> "PoleConfiguration":
        return cls(rng.uniform(0.0, TWO_PI, N))

    def rotate(self, angle: float) -> "PoleConfiguration":
        return PoleConfiguration(self.angles + angle)

    def conjugate(self) -> "PoleConfiguration":
        return PoleConfiguration(-self.angles)

    def canonical(self) -> "PoleConfiguration":
        """Sorted and rotated so that the lexicographically smallest gap sequence starts at 0.

        Two configurations that differ by a rotation and relabeling have the
        same canonical form (up to rounding).
        """
        a = np.sort(self.angles)
        gaps = np.diff(np.concatenate([a, [a[0] + TWO_PI]]))
        n = len(a)
        best = min(range(n), key=lambda s: tuple(np.round(np.roll(gaps, -s), 12)))
        return PoleConfiguration(np.roll(a, -best) - a[best])

    def gauge_distance(self, other: "PoleConfiguration") -> float:
        """Distance modulo rotation and relabeling.

        Minimum over cyclic relabelings of the sorted angles of the smallest
        achievable maximal angular deviation after the best rotation.
        """
        if other.N != self.N:
            raise DomainError("configurations have different sizes")
        a = np.sort(self.angles)
        b = np.sort(other.angles)
        best = math.inf
        for shift in range(self.N):
            dev = np.roll(b, -shift) - a
            dev = dev[0] + _wrap(dev - dev[0])
            best = min(best, 0.5 * float(dev.max() - dev.min()))
        return best

    def distance_to_equispaced(self) -> float:
        return self.gauge_distance(PoleConfiguration.equispaced(self.N))

    def to_json(self) -> str:
        return json.dumps([float(x) for x in self.angles])

    @classmethod
    def from_json(cls, text: str) -> "PoleConfiguration":
        data = json.loads(text)
        if not isinstance(data, list) or not all(isinstance(x, (int, float)) for x in data):
            raise DomainError("pole file must hold a JSON array of angles in radians")
        return cls(np.array(data, dtype=float))

    @classmethod
    def load(cls, path) -> "PoleConfiguration":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

    def save(self, path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    def __repr__(self):
        return f"PoleConfiguration(N={self.N})"


@dataclass(frozen=True)
class SimplestFraction:
    """``h(z) = Σ_k 1/(z - e^{i theta_k})``."""

    poles: PoleConfiguration

    @property
    def N(self) -> int:
        return self.poles.N

    def __call__(self, z):
        return evaluate(self, z)


def evaluate(h: SimplestFraction, z):
    """Sum of the Cauchy kernels at ``z`` (scalar or array)."""
    zz = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    vals, mind = kernels.cauchy_sum(np.ascontiguousarray(h.poles.angles), np.ascontiguousarray(zz))
    if zz.size and mind < POLE_THRESHOLD:
        raise PoleError(f"evaluation point within {mind:.1e} of a pole")
    vals = vals.reshape(np.shape(z))
    return complex(vals) if np.ndim(z) == 0 else vals


def psi(N: int, z):
    """``Psi_N(z) = N z^{N-1} / (z^N - 1)``: poles at the ``N``-th roots of unity."""
    if N < 1:
        raise DomainError("N must be >= 1")
    z = np.asarray(z, dtype=complex)
    zn1 = z ** (N - 1)
    den = zn1 * z - 1.0
    if np.any(np.abs(den) < POLE_THRESHOLD * N):
        raise PoleError("z is an N-th root of unity")
    out = N * zn1 / den
    return complex(out) if out.ndim == 0 else out


def taylor_coefficients(h: SimplestFraction, M: int) -> np.ndarray:
    """``a_0..a_M`` of ``h`` at the origin: ``a_s = -Σ_k e^{-i(s+1) theta_k}``."""
    if M < 0:
        raise DomainError("M must be >= 0")
    S = kernels.power_sums(np.ascontiguousarray(h.poles.angles), M + 1)
    return -np.conj(S)


def taylor_tail_bound(N: int, M: int, radius: float) -> float:
    """Bound on ``|h(z) - Σ_{s<=M} a_s z^s|`` for ``|z| <= radius < 1``."""
    return 2.0 * N * radius ** (M + 1) / (1.0 - radius)
