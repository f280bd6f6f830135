"""Pure-Python (NumPy) RK4 kernel; same contract as ``_kernels.rk4_cascade``."""
import numpy as np


def _history(states, k_now, dt, t_query, j):
    """Linearly interpolated X_j at t_query <= k_now*dt; zero before t=0."""
    if t_query < 0:
        return 0.0
    pos = t_query / dt
    k = int(pos)
    if k >= k_now:
        return states[k_now, j]
    w = pos - k
    return (1 - w) * states[k, j] + w * states[k + 1, j]


def _rhs(x, r, t, alpha, beta, leak, eps, inv_xtot, lags, states, k_now, dt):
    n = len(alpha)
    dx = np.empty(n + 1)
    dx[0] = alpha[0] * r * (1 - x[0] * inv_xtot[0]) + eps * x[n - 1] - beta[0] * x[0]
    for i in range(1, n + 1):
        lag = lags[i - 1]
        up = x[i - 1] if lag == 0 else _history(states, k_now, dt, t - lag, i - 1)
        if i < n:
            dx[i] = alpha[i] * up * (1 - x[i] * inv_xtot[i]) - beta[i] * x[i]
        else:
            dx[i] = up - leak * x[i]
    return dx


def _linear_step_maps(alpha, beta, leak, eps, dt):
    """Affine RK4 step x' = P x + q0 r(t) + qm r(t+dt/2) + q1 r(t+dt).

    For a linear right-hand side the classical RK4 update is exactly affine in
    the state and the three input samples, so its coefficients are read off
    by stepping basis vectors.
    """
    n = len(alpha)
    dim = n + 1
    zeros = np.zeros(n)
    no_lag = np.zeros(n)

    def step(x, r0, rm, r1):
        args = (alpha, beta, leak, eps, zeros, no_lag, None, 0, dt)
        k1 = _rhs(x, r0, 0.0, *args)
        k2 = _rhs(x + 0.5 * dt * k1, rm, 0.0, *args)
        k3 = _rhs(x + 0.5 * dt * k2, rm, 0.0, *args)
        k4 = _rhs(x + dt * k3, r1, 0.0, *args)
        return x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    eye = np.eye(dim)
    P = np.column_stack([step(eye[j], 0, 0, 0) for j in range(dim)])
    x0 = np.zeros(dim)
    q0 = step(x0, 1, 0, 0)
    qm = step(x0, 0, 1, 0)
    q1 = step(x0, 0, 0, 1)
    return P, q0, qm, q1


def rk4_cascade(alpha, beta, leak, eps, inv_xtot, lags, r_half, kick, kick_step,
                dt, nsteps):
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    inv_xtot = np.asarray(inv_xtot, dtype=float)
    lags = np.asarray(lags, dtype=float)
    r_half = np.asarray(r_half, dtype=float)
    n = len(alpha)
    states = np.zeros((nsteps + 1, n + 1))
    x = np.zeros(n + 1)

    if not inv_xtot.any() and not lags.any():
        P, q0, qm, q1 = _linear_step_maps(alpha, beta, leak, eps, dt)
        drive = (np.outer(r_half[0:2 * nsteps:2], q0)
                 + np.outer(r_half[1:2 * nsteps:2], qm)
                 + np.outer(r_half[2:2 * nsteps + 1:2], q1))
        for k in range(nsteps):
            if k == kick_step:
                x[0] += kick
            states[k] = x
            x = P @ x + drive[k]
        if nsteps == kick_step:
            x[0] += kick
        states[nsteps] = x
        return states

    for k in range(nsteps):
        if k == kick_step:
            x[0] += kick
        states[k] = x
        t = k * dt
        args = (alpha, beta, leak, eps, inv_xtot, lags, states, k, dt)
        k1 = _rhs(x, r_half[2 * k], t, *args)
        k2 = _rhs(x + 0.5 * dt * k1, r_half[2 * k + 1], t + 0.5 * dt, *args)
        k3 = _rhs(x + 0.5 * dt * k2, r_half[2 * k + 1], t + 0.5 * dt, *args)
        k4 = _rhs(x + dt * k3, r_half[2 * k + 2], t + dt, *args)
        x = x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    if nsteps == kick_step:
        x[0] += kick
    states[nsteps] = x
    return states
