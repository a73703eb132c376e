"""NumPy versions of the compiled kernels (same signatures, same results)."""

from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi
COINCIDENT = 1e-15
_CHUNK = 2_000_000


def _pairs(n):
    j, k = np.triu_indices(n, 1)
    return j, k


def _reduce(t):
    r = t - TWO_PI * np.round(t / TWO_PI)
    return np.abs(r), np.where(r < 0.0, -1.0, 1.0)


def _quad_phi(tau, u, s, w):
    val = np.empty(tau.shape)
    der = np.empty(tau.shape)
    step = max(1, _CHUNK // len(u))
    for lo in range(0, len(tau), step):
        t = tau[lo:lo + step, None]
        z = np.exp(1j * t)
        hs = np.sin(0.5 * t)
        d = u + s * (2.0 * hs * hs - 1j * np.sin(t))
        q = z / d
        val[lo:lo + step] = q.real @ w
        der[lo:lo + step] = (1j * q / d).real @ w
    return val, der


def _binom_phi(tau, n, poly):
    hs = np.sin(0.5 * tau)
    y = 2.0 * hs * hs + 1j * np.sin(tau)
    L = -np.log(2.0 * hs) + 0.5j * (math.pi - tau)
    lp = -0.5 * np.cos(0.5 * tau) / hs - 0.5j
    yn1 = y ** (n - 1)
    e1 = n * yn1 * (np.sin(tau) + 1j * np.cos(tau))
    val = (yn1 * y * L).real - poly[0]
    der = (e1 * L + yn1 * y * lp).real
    for k in range(1, n):
        val -= poly[k] * np.cos(k * tau)
        der += poly[k] * k * np.sin(k * tau)
    return val, der


def _assemble(theta, charge, phi0, evaluate, want_grad):
    theta = np.asarray(theta, dtype=float)
    charge = np.asarray(charge, dtype=float)
    n = len(theta)
    energy = float(np.sum(charge * charge) * phi0)
    grad = np.zeros(n)
    if n < 2:
        return energy, grad
    j, k = _pairs(n)
    tau, sign = _reduce(theta[j] - theta[k])
    qq = charge[j] * charge[k]
    near = tau < COINCIDENT
    val, der = evaluate(np.where(near, 1.0, tau))
    val = np.where(near, phi0, val)
    der = np.where(near, 0.0, der)
    energy += 2.0 * float(np.sum(qq * val))
    if want_grad:
        d = 2.0 * qq * sign * der
        grad += np.bincount(j, d, n) - np.bincount(k, d, n)
    return energy, grad


def pair_sums_quad(theta, charge, u, s, w, phi0, want_grad=True):
    return _assemble(theta, charge, phi0, lambda t: _quad_phi(t, u, s, w), want_grad)


def pair_sums_binom(theta, charge, poly, n, phi0, want_grad=True):
    return _assemble(theta, charge, phi0, lambda t: _binom_phi(t, n, poly), want_grad)


def cauchy_sum(angles, z):
    angles = np.asarray(angles, dtype=float)
    z = np.asarray(z, dtype=complex)
    poles = np.exp(1j * angles)
    out = np.empty(len(z), dtype=complex)
    mind = np.inf
    step = max(1, _CHUNK // max(len(poles), 1))
    for lo in range(0, len(z), step):
        d = z[lo:lo + step, None] - poles
        mind = min(mind, float(np.abs(d).min())) if d.size else mind
        out[lo:lo + step] = (1.0 / d).sum(axis=1)
    return out, mind


def power_sums(angles, J):
    angles = np.asarray(angles, dtype=float)
    out = np.zeros(J, dtype=complex)
    j = np.arange(1, J + 1)
    step = max(1, _CHUNK // max(J, 1))
    for lo in range(0, len(angles), step):
        out += np.exp(1j * np.outer(angles[lo:lo + step], j)).sum(axis=0)
    return out


def local_sq_sum(angles, owner, x, d):
    angles = np.asarray(angles, dtype=float)
    owner = np.asarray(owner)
    x = np.asarray(x, dtype=float)
    out = np.empty(len(x))
    step = max(1, _CHUNK // max(len(angles), 1))
    idx = np.arange(len(angles))
    for lo in range(0, len(x), step):
        o = owner[lo:lo + step, None]
        delta = np.where(idx == o, 0.0, angles - angles[o]) - x[lo:lo + step, None]
        hs = np.sin(0.5 * delta)
        s = (1.0 / ((2.0 * hs * hs - d) - 1j * np.sin(delta))).sum(axis=1)
        out[lo:lo + step] = s.real ** 2 + s.imag ** 2
    return out
