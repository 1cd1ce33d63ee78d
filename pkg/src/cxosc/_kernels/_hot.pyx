# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: oscillator-function tables and Fock-basis Wigner maps.

Same recurrences as the NumPy fallback in ``_ref.py``; the point-wise loops
here avoid the fallback's full-grid temporaries, and all coefficient products
and log-space prefactors are hoisted out of the grid loops.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, sqrt, log, lgamma, pi

cnp.import_array()


def hermite_table(x, int n_max):
    """Normalized oscillator functions phi_0..phi_{n_max} sampled on ``x``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = \
        np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t nx = xv.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = \
        np.empty((n_max + 1, nx), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] c1 = np.empty(n_max + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] c2 = np.empty(n_max + 1)
    cdef Py_ssize_t i
    cdef int k
    cdef double xi, prev, cur, nxt
    cdef double norm0 = pi ** -0.25
    for k in range(1, n_max):
        c1[k] = sqrt(2.0 / (k + 1))
        c2[k] = sqrt(k / (k + 1.0))
    for i in range(nx):
        xi = xv[i]
        cur = norm0 * exp(-0.5 * xi * xi)
        out[0, i] = cur
        if n_max >= 1:
            prev = cur
            cur = sqrt(2.0) * xi * cur
            out[1, i] = cur
            for k in range(1, n_max):
                nxt = c1[k] * xi * cur - c2[k] * prev
                prev = cur
                cur = nxt
                out[k + 1, i] = cur
    return out


def fock_wigner(coeffs, xs, ps):
    """Wigner map of ``sum_k coeffs[k] phi_k`` on the (xs, ps) grid.

    Point-wise evaluation of the cross-Wigner sum with Gaussian-scaled
    associated-Laguerre recurrences; see the fallback implementation for the
    formula.  The weights conj(c_m) c_{m+alpha} times the log-space
    prefactors are tabulated once per call.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] c = \
        np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = \
        np.ascontiguousarray(xs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pv = \
        np.ascontiguousarray(ps, dtype=np.float64)
    cdef Py_ssize_t nx = xv.shape[0], np_ = pv.shape[0]
    cdef Py_ssize_t m_count = c.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = \
        np.empty((nx, np_), dtype=np.float64)

    # weight table: w[alpha, m] = conj(c_m) c_{m+alpha} (-1)^m sqrt(2^a m!/(m+a)!)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] wre = \
        np.zeros((m_count, m_count), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] wim = \
        np.zeros((m_count, m_count), dtype=np.float64)
    # m_top[alpha]: one past the largest m with a nonzero weight (0 if none)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] m_top = \
        np.zeros(m_count, dtype=np.int64)
    cdef Py_ssize_t m, alpha
    cdef double sgn, pref
    cdef double complex rho
    for alpha in range(m_count):
        for m in range(m_count - alpha):
            rho = c[m].conjugate() * c[m + alpha]
            if rho.real != 0.0 or rho.imag != 0.0:
                sgn = -1.0 if m % 2 else 1.0
                pref = sgn * exp(0.5 * (alpha * log(2.0)
                                        + lgamma(m + 1) - lgamma(m + alpha + 1)))
                wre[alpha, m] = rho.real * pref
                wim[alpha, m] = rho.imag * pref
                m_top[alpha] = m + 1

    # row-blocked evaluation: all inner loops are elementwise over the p row,
    # so there is no serial dependency chain inside them
    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf = np.empty(9 * np_)
    cdef double[::1] u = buf[0:np_]
    cdef double[::1] gauss = buf[np_:2 * np_]
    cdef double[::1] powre = buf[2 * np_:3 * np_]
    cdef double[::1] powim = buf[3 * np_:4 * np_]
    cdef double[::1] lag_prev = buf[4 * np_:5 * np_]
    cdef double[::1] lag = buf[5 * np_:6 * np_]
    cdef double[::1] lag_next = buf[6 * np_:7 * np_]
    cdef double[::1] acc_re = buf[7 * np_:8 * np_]
    cdef double[::1] acc_im = buf[8 * np_:9 * np_]
    cdef double[::1] swap

    cdef Py_ssize_t i, q, top
    cdef double x, p, t1, t2, div, wa_re, wa_im, tmp
    for i in range(nx):
        x = xv[i]
        for q in range(np_):
            p = pv[q]
            u[q] = 2.0 * (x * x + p * p)
            gauss[q] = exp(-0.5 * u[q])
            powre[q] = 1.0
            powim[q] = 0.0
        for q in range(np_):
            out[i, q] = 0.0
        for alpha in range(m_count):
            if alpha > 0:
                for q in range(np_):  # pow *= (x - i p)
                    tmp = powre[q] * x + powim[q] * pv[q]
                    powim[q] = -powre[q] * pv[q] + powim[q] * x
                    powre[q] = tmp
            top = m_top[alpha]
            if top == 0:
                continue
            for q in range(np_):
                lag_prev[q] = 0.0
                lag[q] = gauss[q]
                acc_re[q] = 0.0
                acc_im[q] = 0.0
            for m in range(top):
                wa_re = wre[alpha, m]
                wa_im = wim[alpha, m]
                t1 = 2.0 * m + 1.0 + alpha
                t2 = m + alpha
                div = m + 1.0
                for q in range(np_):
                    acc_re[q] += wa_re * lag[q]
                    acc_im[q] += wa_im * lag[q]
                    lag_next[q] = ((t1 - u[q]) * lag[q]
                                   - t2 * lag_prev[q]) / div
                swap = lag_prev
                lag_prev = lag
                lag = lag_next
                lag_next = swap
            if alpha == 0:
                for q in range(np_):
                    out[i, q] += acc_re[q]
            else:
                for q in range(np_):
                    out[i, q] += 2.0 * (acc_re[q] * powre[q]
                                        - acc_im[q] * powim[q])
        for q in range(np_):
            out[i, q] /= pi
    return out
