"""Numerov recurrences for u'' = g(r) u on a uniform grid (numba kernels).

Written in the w-form ``w_i = (1 - h^2 g_i / 12) u_i``,
``w_{i+1} = 2 w_i - w_{i-1} + h^2 g_i u_i``.
"""

import numba
import numpy as np

_BIG = 1e200


@numba.njit(cache=True)
def integrate_outward(g, h, u1, g0u0, stop):
    """Outward solution on indices 0..stop with u_0 = 0.

    ``g0u0`` is the r -> 0 limit of g(r) u(r), finite even where g itself
    diverges (Coulomb, centrifugal).  Values are rescaled by positive
    factors when they grow too large; signs and ratios are preserved.
    """
    c = h * h / 12.0
    u = np.zeros(stop + 1)
    u[1] = u1
    w_prev = -c * g0u0
    w_cur = (1.0 - c * g[1]) * u1
    for i in range(1, stop):
        w_next = 2.0 * w_cur - w_prev + h * h * g[i] * u[i]
        u[i + 1] = w_next / (1.0 - c * g[i + 1])
        w_prev, w_cur = w_cur, w_next
        if abs(u[i + 1]) > _BIG:
            for j in range(i + 2):
                u[j] /= _BIG
            w_prev /= _BIG
            w_cur /= _BIG
    return u


@numba.njit(cache=True)
def integrate_inward(g, h, u_last, u_next, start):
    """Inward solution on indices start..N-1 from seeds at N-1 and N-2."""
    n = g.size
    c = h * h / 12.0
    u = np.zeros(n)
    u[n - 1] = u_last
    u[n - 2] = u_next
    w_prev = (1.0 - c * g[n - 1]) * u_last
    w_cur = (1.0 - c * g[n - 2]) * u_next
    for i in range(n - 2, start, -1):
        w_next = 2.0 * w_cur - w_prev + h * h * g[i] * u[i]
        u[i - 1] = w_next / (1.0 - c * g[i - 1])
        w_prev, w_cur = w_cur, w_next
        if abs(u[i - 1]) > _BIG:
            for j in range(i - 1, n):
                u[j] /= _BIG
            w_prev /= _BIG
            w_cur /= _BIG
    return u


@numba.njit(cache=True)
def count_sign_changes(u, lo, hi):
    count = 0
    last = 0.0
    for i in range(lo, hi):
        v = u[i]
        if v != 0.0:
            if last != 0.0 and (v > 0.0) != (last > 0.0):
                count += 1
            last = v
    return count
