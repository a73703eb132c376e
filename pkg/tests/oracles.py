"""Independent high-precision reference values built directly on mpmath."""

import mpmath


def phi_alpha1(t, dps=40):
    """``Σ_{n>=1} cos(n t) / (n (n+1))`` from the two logarithmic series."""
    with mpmath.workdps(dps):
        t = mpmath.mpf(t)
        z = mpmath.exp(1j * t)
        log_sum = -mpmath.log(1 - z)                 # Σ z^n / n
        shifted = (log_sum - z) / z                  # Σ z^n / (n + 1)
        return float(mpmath.re(log_sum - shifted))


def psi_norm_sq_alpha1(N, dps=30):
    """``2 N Σ_{m>=1} 1/(m (m N + 1))``: only powers divisible by ``N`` survive."""
    with mpmath.workdps(dps):
        return float(2 * N * mpmath.nsum(lambda m: 1 / (m * (m * N + 1)), [1, mpmath.inf]))


def moment_power(alpha, k, dps=30):
    with mpmath.workdps(dps):
        return float(mpmath.beta(k + 1, alpha + 1))


def gram_norm_sq_alpha1(angles, dps=30):
    """``2 Σ_{j,k} phi(theta_j - theta_k)`` with the mpmath kernel."""
    total = mpmath.mpf(0)
    for a in angles:
        for b in angles:
            d = float(a - b)
            total += mpmath.mpf(1) if abs(d) < 1e-300 else phi_alpha1(d, dps)
    return float(2 * total)
