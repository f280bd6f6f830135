# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 kernel for cascade integration."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline double _history(double[:, ::1] states, Py_ssize_t k_now, double dt,
                            double tq, Py_ssize_t j) noexcept nogil:
    cdef double pos, w
    cdef Py_ssize_t k
    if tq < 0:
        return 0.0
    pos = tq / dt
    k = <Py_ssize_t> pos
    if k >= k_now:
        return states[k_now, j]
    w = pos - k
    return (1 - w) * states[k, j] + w * states[k + 1, j]


cdef void _rhs(double[::1] x, double r, double t, double[::1] alpha,
               double[::1] beta, double leak, double eps, double[::1] inv_xtot,
               double[::1] lags, double[:, ::1] states, Py_ssize_t k_now,
               double dt, double[::1] dx) noexcept nogil:
    cdef Py_ssize_t n = alpha.shape[0]
    cdef Py_ssize_t i
    cdef double up, lag
    dx[0] = alpha[0] * r * (1 - x[0] * inv_xtot[0]) + eps * x[n - 1] - beta[0] * x[0]
    for i in range(1, n + 1):
        lag = lags[i - 1]
        if lag == 0:
            up = x[i - 1]
        else:
            up = _history(states, k_now, dt, t - lag, i - 1)
        if i < n:
            dx[i] = alpha[i] * up * (1 - x[i] * inv_xtot[i]) - beta[i] * x[i]
        else:
            dx[i] = up - leak * x[i]


def rk4_cascade(alpha, beta, double leak, double eps, inv_xtot, lags, r_half,
                double kick, Py_ssize_t kick_step, double dt, Py_ssize_t nsteps):
    cdef double[::1] a = np.ascontiguousarray(alpha, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(beta, dtype=np.float64)
    cdef double[::1] inv = np.ascontiguousarray(inv_xtot, dtype=np.float64)
    cdef double[::1] lg = np.ascontiguousarray(lags, dtype=np.float64)
    cdef double[::1] rh = np.ascontiguousarray(r_half, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t dim = n + 1
    out = np.zeros((nsteps + 1, dim), dtype=np.float64)
    cdef double[:, ::1] states = out
    cdef double[::1] x = np.zeros(dim)
    cdef double[::1] tmp = np.zeros(dim)
    cdef double[::1] k1 = np.zeros(dim)
    cdef double[::1] k2 = np.zeros(dim)
    cdef double[::1] k3 = np.zeros(dim)
    cdef double[::1] k4 = np.zeros(dim)
    cdef Py_ssize_t k, i
    cdef double t, h2 = 0.5 * dt, h6 = dt / 6.0

    with nogil:
        for k in range(nsteps):
            if k == kick_step:
                x[0] += kick
            for i in range(dim):
                states[k, i] = x[i]
            t = k * dt
            _rhs(x, rh[2 * k], t, a, b, leak, eps, inv, lg, states, k, dt, k1)
            for i in range(dim):
                tmp[i] = x[i] + h2 * k1[i]
            _rhs(tmp, rh[2 * k + 1], t + h2, a, b, leak, eps, inv, lg, states, k, dt, k2)
            for i in range(dim):
                tmp[i] = x[i] + h2 * k2[i]
            _rhs(tmp, rh[2 * k + 1], t + h2, a, b, leak, eps, inv, lg, states, k, dt, k3)
            for i in range(dim):
                tmp[i] = x[i] + dt * k3[i]
            _rhs(tmp, rh[2 * k + 2], t + dt, a, b, leak, eps, inv, lg, states, k, dt, k4)
            for i in range(dim):
                x[i] = x[i] + h6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i])
        if nsteps == kick_step:
            x[0] += kick
        for i in range(dim):
            states[nsteps, i] = x[i]
    return out
