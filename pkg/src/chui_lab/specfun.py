"""Gamma and zeta for real arguments, written out so the limit constant has no
hidden dependency; scipy and mpmath only serve as test oracles."""

from __future__ import annotations

import math

from .errors import DomainError

# Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients)
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# Bernoulli numbers B_2, B_4, ..., B_20 for the Euler-Maclaurin tail
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510,
              43867 / 798, -174611 / 330)


def log_gamma(x: float) -> float:
    """``log Γ(x)`` for ``x > 0``."""
    if x <= 0:
        raise DomainError("log_gamma needs x > 0")
    if x < 0.5:
        # reflection keeps the series in its accurate range
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    x -= 1.0
    acc = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    return 0.5 * math.log(2 * math.pi) + (x + 0.5) * math.log(t) - t + math.log(acc)


def gamma(x: float) -> float:
    """``Γ(x)`` for ``x > 0``; small integers are exact."""
    if x <= 0:
        raise DomainError("gamma needs x > 0")
    if x == int(x) and x <= 30:
        return float(math.factorial(int(x) - 1))
    # shift into [1, 2) and multiply back: the Lanczos sum is most accurate there
    shift = 1.0
    while x >= 2.0:
        x -= 1.0
        shift *= x
    return shift * math.exp(log_gamma(x))


def zeta(s: float, n: int = 12) -> float:
    """Riemann zeta for real ``s > 1`` by Euler-Maclaurin summation."""
    if s <= 1:
        raise DomainError("zeta needs s > 1")
    head = math.fsum(k ** -s for k in range(1, n))
    tail = n ** (1.0 - s) / (s - 1.0) + 0.5 * n ** -s
    # Σ_k B_2k/(2k)! * s (s+1) ... (s+2k-2) * n^{-s-2k+1}
    rising = s
    power = n ** (-s - 1.0)
    fact = 2.0
    for k, b in enumerate(_BERNOULLI, start=1):
        term = b / fact * rising * power
        tail += term
        if abs(term) < 1e-18 * head:
            break
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power /= n * n
        fact *= (2 * k + 1) * (2 * k + 2)
    return head + tail
