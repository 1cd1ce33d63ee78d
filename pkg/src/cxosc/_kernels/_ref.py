"""NumPy implementations of the hot kernels.

These are the reference semantics for the compiled extension in ``_hot.pyx``;
both backends implement the same recurrences so results agree to rounding.
"""

import numpy as np
from math import lgamma


def hermite_table(x, n_max):
    """Sample the normalized oscillator functions phi_0..phi_{n_max} on ``x``.

    Uses the stable normalized recurrence
    ``phi_{k+1} = sqrt(2/(k+1)) x phi_k - sqrt(k/(k+1)) phi_{k-1}`` seeded by
    ``phi_0 = pi**-0.25 exp(-x**2/2)``.  Returns an array of shape
    ``(n_max + 1, len(x))``.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.empty((n_max + 1, x.size), dtype=np.float64)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for k in range(1, n_max):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * x * out[k] \
            - np.sqrt(k / (k + 1.0)) * out[k - 1]
    return out


def fock_wigner(coeffs, xs, ps):
    """Wigner map of the pure state ``sum_k coeffs[k] phi_k`` on a phase grid.

    Evaluates ``W = sum_{m,n} conj(c_m) c_n K_mn`` where ``K_mn`` is the
    cross-Wigner kernel of two oscillator number states,

        K_mn = (-1)^m / pi * sqrt(2^(n-m) m!/n!) (x - i p)^(n-m)
               * L_m^(n-m)(2 (x^2+p^2)) * exp(-(x^2+p^2)),   m <= n,

    with ``K_nm = conj(K_mn)``.  The associated Laguerre factor is carried
    pre-multiplied by the Gaussian so every intermediate stays finite up to
    Fock index ~60 and |x|,|p| ~ 20; the prefactor is evaluated in log space.
    Returns a real array of shape ``(len(xs), len(ps))``.
    """
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    m_count = c.size
    x2d, p2d = np.meshgrid(np.asarray(xs, dtype=np.float64),
                           np.asarray(ps, dtype=np.float64), indexing="ij")
    u = 2.0 * (x2d * x2d + p2d * p2d)
    xi = x2d - 1j * p2d
    gauss = np.exp(-0.5 * u)

    w = np.zeros(u.shape, dtype=np.float64)
    xi_pow = np.ones(u.shape, dtype=np.complex128)
    for alpha in range(m_count):
        if alpha > 0:
            xi_pow = xi_pow * xi
        lag_prev = np.zeros_like(u)
        lag = gauss.copy()  # L_0^alpha(u) * exp(-u/2)
        acc = np.zeros(u.shape, dtype=np.complex128)
        for m in range(m_count - alpha):
            rho = np.conj(c[m]) * c[m + alpha]
            if rho != 0.0:
                pref = (-1.0) ** m * np.exp(
                    0.5 * (alpha * np.log(2.0) + lgamma(m + 1) - lgamma(m + alpha + 1)))
                acc = acc + (rho * pref) * lag
            lag_next = ((2 * m + 1 + alpha - u) * lag - (m + alpha) * lag_prev) / (m + 1.0)
            lag_prev, lag = lag, lag_next
        if alpha == 0:
            w += acc.real
        else:
            w += 2.0 * (acc * xi_pow).real
    return w / np.pi
