# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: pair energies of Cauchy kernels, kernel sums, power sums.

Every routine releases the GIL for its main loop, so independent optimizer
starts can run in threads.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, log, sqrt, round, M_PI, INFINITY

cnp.import_array()

cdef double TWO_PI = 2.0 * M_PI
cdef double COINCIDENT = 1e-15


cdef inline void _add(double x, double* acc, double* comp) noexcept nogil:
    # Neumaier compensated summation: pair energies swing through partial sums
    # of order N before cancelling, which plain summation turns into noise
    cdef double t = acc[0] + x
    if (acc[0] if acc[0] >= 0 else -acc[0]) >= (x if x >= 0 else -x):
        comp[0] += (acc[0] - t) + x
    else:
        comp[0] += (x - t) + acc[0]
    acc[0] = t


cdef inline void _reduce(double t, double* tau, double* sign) noexcept nogil:
    # symmetric reduction to [-pi, pi] keeps tiny separations of either sign exact
    cdef double r = t - TWO_PI * round(t / TWO_PI)
    if r < 0.0:
        tau[0] = -r
        sign[0] = -1.0
    else:
        tau[0] = r
        sign[0] = 1.0


cdef inline void _quad_phi(double tau, const double* u, const double* s, const double* w,
                           Py_ssize_t m, double* val, double* der) noexcept nogil:
    # Re z/d and Re iz/d^2 with d = 1 - s e^{it} = u + s(2 sin^2(t/2) - i sin t)
    cdef double c = cos(tau), sn = sin(tau), hs = sin(0.5 * tau)
    cdef double a = 2.0 * hs * hs
    cdef double dr, di, den, qr, qi, q2r, q2i, acc0 = 0.0, acc1 = 0.0
    cdef Py_ssize_t i
    for i in range(m):
        dr = u[i] + s[i] * a
        di = -s[i] * sn
        den = dr * dr + di * di
        # q = z / d
        qr = (c * dr + sn * di) / den
        qi = (sn * dr - c * di) / den
        acc0 += w[i] * qr
        # i z / d^2 = i q / d
        q2r = (qr * dr + qi * di) / den
        q2i = (qi * dr - qr * di) / den
        acc1 += w[i] * (-q2i)
    val[0] = acc0
    der[0] = acc1


def pair_sums_quad(const double[::1] theta, const double[::1] charge, const double[::1] u,
                   const double[::1] s, const double[::1] w, double phi0, bint want_grad=True):
    """Energy ``sum_jk q_j q_k phi(theta_j - theta_k)`` and its gradient (quadrature kernel)."""
    cdef Py_ssize_t n = theta.shape[0], m = u.shape[0], j, k
    cdef double energy = 0.0, comp = 0.0, tau, sign, val, der, qq
    grad_arr = np.zeros(n)
    cdef double[::1] grad = grad_arr
    with nogil:
        for j in range(n):
            _add(charge[j] * charge[j] * phi0, &energy, &comp)
            for k in range(j + 1, n):
                _reduce(theta[j] - theta[k], &tau, &sign)
                qq = charge[j] * charge[k]
                if tau < COINCIDENT:
                    _add(2.0 * qq * phi0, &energy, &comp)
                    continue
                _quad_phi(tau, &u[0], &s[0], &w[0], m, &val, &der)
                _add(2.0 * qq * val, &energy, &comp)
                if want_grad:
                    der = 2.0 * qq * sign * der
                    grad[j] += der
                    grad[k] -= der
    return energy + comp, grad_arr


cdef inline void _binom_phi(double tau, int n, const double* poly, double* val,
                            double* der) noexcept nogil:
    # phi = Re[y^n L] - P(t), y = 1 - e^{-it}, L = -log(1 - e^{it})
    cdef double hs = sin(0.5 * tau), sn = sin(tau), c = cos(tau)
    cdef double yr = 2.0 * hs * hs, yi = sn
    cdef double Lr = -log(2.0 * hs), Li = 0.5 * (M_PI - tau)
    cdef double pr = 1.0, pi_ = 0.0, qr = 1.0, qi = 0.0, tr
    cdef int j
    for j in range(n):
        if j == n - 1:
            qr = pr
            qi = pi_
        tr = pr * yr - pi_ * yi
        pi_ = pr * yi + pi_ * yr
        pr = tr
    # E0 = y^n, E1 = n y^{n-1} * i e^{-it}, Lp = i q with q = (-1 + i cot(t/2)) / 2
    cdef double e1r, e1i, ar, ai, lpr, lpi
    ar = sn
    ai = c                                            # i e^{-it} = sin t + i cos t
    e1r = n * (qr * ar - qi * ai)
    e1i = n * (qr * ai + qi * ar)
    lpr = -0.5 * cos(0.5 * tau) / hs                  # i q real part
    lpi = -0.5
    cdef double v = pr * Lr - pi_ * Li
    cdef double d = (e1r * Lr - e1i * Li) + (pr * lpr - pi_ * lpi)
    for j in range(1, n):
        v -= poly[j] * cos(j * tau)
        d += poly[j] * j * sin(j * tau)
    v -= poly[0]
    val[0] = v
    der[0] = d


def pair_sums_binom(const double[::1] theta, const double[::1] charge, const double[::1] poly, int n,
                    double phi0, bint want_grad=True):
    """Same as :func:`pair_sums_quad` for the closed-form kernel of ``g(t) = t^n``.

    ``poly[k]`` is the coefficient of ``cos(k t)`` in the trigonometric part.
    """
    cdef Py_ssize_t N = theta.shape[0], j, k
    cdef double energy = 0.0, comp = 0.0, tau, sign, val, der, qq
    grad_arr = np.zeros(N)
    cdef double[::1] grad = grad_arr
    with nogil:
        for j in range(N):
            _add(charge[j] * charge[j] * phi0, &energy, &comp)
            for k in range(j + 1, N):
                _reduce(theta[j] - theta[k], &tau, &sign)
                qq = charge[j] * charge[k]
                if tau < COINCIDENT:
                    _add(2.0 * qq * phi0, &energy, &comp)
                    continue
                _binom_phi(tau, n, &poly[0], &val, &der)
                _add(2.0 * qq * val, &energy, &comp)
                if want_grad:
                    der = 2.0 * qq * sign * der
                    grad[j] += der
                    grad[k] -= der
    return energy + comp, grad_arr


def cauchy_sum(const double[::1] angles, const double complex[::1] z):
    """``sum_k 1/(z - e^{i angles_k})`` at every ``z`` and the smallest pole distance."""
    cdef Py_ssize_t n = angles.shape[0], m = z.shape[0], i, k
    cdef double[::1] pc = np.cos(angles)
    cdef double[::1] ps = np.sin(angles)
    out_arr = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef double zr, zi, dr, di, den, accr, acci, mind = INFINITY
    with nogil:
        for i in range(m):
            zr = z[i].real
            zi = z[i].imag
            accr = 0.0
            acci = 0.0
            for k in range(n):
                dr = zr - pc[k]
                di = zi - ps[k]
                den = dr * dr + di * di
                if den < mind:
                    mind = den
                accr += dr / den
                acci -= di / den
            out[i] = accr + 1j * acci
    return out_arr, sqrt(mind)


def power_sums(const double[::1] angles, Py_ssize_t J):
    """``S_j = sum_k e^{i j angles_k}`` for ``j = 1..J`` by iterated multiplication."""
    cdef Py_ssize_t n = angles.shape[0], j, k
    out_arr = np.zeros(J, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef double br, bi, pr, pi_, tr, accr
    cdef double[::1] acc_r = np.zeros(J), acc_i = np.zeros(J)
    with nogil:
        for k in range(n):
            br = cos(angles[k])
            bi = sin(angles[k])
            pr = br
            pi_ = bi
            for j in range(J):
                acc_r[j] += pr
                acc_i[j] += pi_
                tr = pr * br - pi_ * bi
                pi_ = pr * bi + pi_ * br
                pr = tr
                # renormalise every 64 steps to keep |b^j| = 1
                if (j & 63) == 63:
                    accr = sqrt(pr * pr + pi_ * pi_)
                    pr /= accr
                    pi_ /= accr
        for j in range(J):
            out[j] = acc_r[j] + 1j * acc_i[j]
    return out_arr


def local_sq_sum(const double[::1] angles, const Py_ssize_t[::1] owner, const double[::1] x,
                 double d):
    """``|Σ_k 1/(r - e^{i delta_k})|^2`` with ``delta_k = (angles_k - angles_owner) - x``.

    ``r = 1 - d``.  Equals ``|h(r e^{i theta})|^2`` at ``theta = angles_owner + x``;
    writing ``r - e^{i delta} = -d + 2 sin^2(delta/2) - i sin delta`` keeps full
    relative accuracy when both ``d`` and ``delta`` are tiny.
    """
    cdef Py_ssize_t n = angles.shape[0], m = x.shape[0], i, k
    out_arr = np.empty(m)
    cdef double[::1] out = out_arr
    cdef double delta, hs, ar, ai, den, accr, acci
    with nogil:
        for i in range(m):
            accr = 0.0
            acci = 0.0
            for k in range(n):
                if k == owner[i]:
                    delta = -x[i]
                else:
                    delta = (angles[k] - angles[owner[i]]) - x[i]
                hs = sin(0.5 * delta)
                ar = -d + 2.0 * hs * hs
                ai = -sin(delta)
                den = ar * ar + ai * ai
                accr += ar / den
                acci -= ai / den
            out[i] = accr * accr + acci * acci
    return out_arr
