"""Time-domain oracle: RK4 integration of the cascade and empirical norms/moments.

The analytic results of :mod:`cascade_lab.xfer` and :mod:`cascade_lab.metrics`
are cross-checked against the quantities computed here.  Integration uses
the kernel chosen in :mod:`cascade_lab._backend`.
"""
from __future__ import annotations

import math

import numpy as np

from . import _backend
from .errors import DegenerateSignal, LengthMismatch, StepTooLarge, TailNotDecayed
from .model import Cascade, Impulse, Sampled, Sinc, Trajectory
from .xfer import build_transfer, eval_transfer

TAIL_RTOL = 1e-6


def max_step(c: Cascade) -> float:
    return 0.1 / max(max(c.beta), c.leak, 1.0)


def _integrate(c, r, t_end, dt, inv_xtot, delays, backend):
    if not (t_end > 0 and dt > 0):
        raise StepTooLarge("t_end and dt must be positive")
    if dt > max_step(c) * (1 + 1e-12):
        raise StepTooLarge(
            f"dt={dt:g} exceeds the stability limit {max_step(c):g} (0.1/max rate)")
    positive = [d for d in delays if d > 0]
    if positive and min(positive) < 10 * dt * (1 - 1e-12):
        raise StepTooLarge(
            f"dt={dt:g} must resolve the smallest delay {min(positive):g} in >= 10 steps")

    nsteps = int(round(t_end / dt))
    lag_in = delays[0]
    times = np.arange(nsteps + 1) * dt
    half = np.arange(2 * nsteps + 1) * (dt / 2) - lag_in
    r_half = np.asarray(r(half), dtype=float)
    kick, kick_step = 0.0, -1
    if isinstance(r, Impulse):
        # exact state jump X1(0+) = alpha_1 instead of a narrow numeric pulse
        kick, kick_step = c.alpha[0], int(round(lag_in / dt))

    kernel = _backend.get_kernel(backend)
    states = kernel(np.asarray(c.alpha, float), np.asarray(c.beta, float),
                    float(c.leak), float(c.feedback), np.asarray(inv_xtot, float),
                    np.asarray(delays[1:], float), r_half, float(kick), kick_step,
                    float(dt), nsteps)
    return Trajectory(dt=float(dt), times=times, input=np.asarray(r(times - lag_in), float),
                      states=np.asarray(states))


def simulate_linear(c: Cascade, r, t_end: float, dt: float, backend=None) -> Trajectory:
    """Integrate the linear cascade from rest with classical RK4."""
    return _integrate(c, r, t_end, dt, np.zeros(c.n), [0.0] * (c.n + 1), backend)


def simulate_nonlinear(c: Cascade, xtot, r, t_end: float, dt: float,
                       backend=None) -> Trajectory:
    """Integrate the saturating model dX_i/dt = alpha_i u_i (1 - X_i/Xtot_i) - beta_i X_i.

    The feedback term, when present, enters X1 unsaturated, as in the linear model.
    """
    xtot = [float(x) for x in xtot]
    if len(xtot) != c.n:
        raise LengthMismatch(f"need {c.n} total concentrations, got {len(xtot)}")
    if any(not x > 0 for x in xtot):
        raise ValueError("total concentrations must be positive")
    inv = [1.0 / x for x in xtot]
    return _integrate(c, r, t_end, dt, inv, [0.0] * (c.n + 1), backend)


def simulate_delayed(c: Cascade, delays, r, t_end: float, dt: float,
                     backend=None) -> Trajectory:
    """Integrate with transmission delays.

    ``delays[0]`` delays the input into X1 and ``delays[i]`` (i >= 1) delays
    X_i into the next stage (the last entry feeds the output stage).  The
    history before t=0 is zero and is read by linear interpolation on the
    stored grid.
    """
    delays = [float(d) for d in delays]
    if len(delays) != c.n + 1:
        raise LengthMismatch(f"need {c.n + 1} delays, got {len(delays)}")
    if any(d < 0 or not math.isfinite(d) for d in delays):
        raise ValueError("delays must be finite and nonnegative")
    if c.feedback != 0:
        raise ValueError("delayed simulation is defined for cascades without feedback")
    return _integrate(c, r, t_end, dt, np.zeros(c.n), delays, backend)


def _check_tail(y, what):
    peak = np.max(np.abs(y))
    if peak == 0:
        return peak
    if abs(y[-1]) >= TAIL_RTOL * peak:
        raise TailNotDecayed(
            f"{what}: final value {abs(y[-1]):.3g} is not below {TAIL_RTOL:g} of peak "
            f"{peak:.3g}; extend t_end")
    return peak


def norm2_time(traj: Trajectory, which="output") -> float:
    """sqrt(integral |signal|^2 dt) by the trapezoid rule on the trajectory grid."""
    y = traj.channel(which)
    _check_tail(y, f"channel {which}")
    return math.sqrt(np.trapezoid(y * y, traj.times))


def empirical_moments(traj: Trajectory, which="output"):
    """Mean time and spread (tau_hat, sigma_hat) of a nonnegative pulse."""
    y = traj.channel(which)
    _check_tail(y, f"channel {which}")
    t = traj.times
    area = np.trapezoid(y, t)
    if not area > 1e-300:
        raise DegenerateSignal(f"channel {which} has no positive area")
    tau = np.trapezoid(t * y, t) / area
    var = np.trapezoid(t * t * y, t) / area - tau * tau
    if var < 0:
        raise DegenerateSignal("negative empirical variance")
    return float(tau), float(math.sqrt(var))


def _input_scale(r):
    if isinstance(r, Sinc):
        return r.eps
    if isinstance(r, Sampled):
        return 1.0 / float(np.min(np.diff(r.times)))
    if hasattr(r, "lam"):
        return r.lam
    if hasattr(r, "t0"):
        return 1.0 / r.t0
    return 1.0


def frequency_grid(c: Cascade, r, omega_max=None, count=4000):
    rates = list(c.beta) + [c.leak] if c.leak > 0 else list(c.beta)
    scale = _input_scale(r)
    if omega_max is None:
        omega_max = 100 * max(max(rates), scale)
    lo = 1e-4 * min(min(rates), scale)
    parts = [np.linspace(0.0, omega_max, count),
             np.geomspace(lo, omega_max, count)]
    if isinstance(r, Sinc):
        e = r.eps
        g = np.geomspace(1e-10, 1.0, count // 2)
        parts.append(e * (1 - g[g < 1]))
        parts.append(e * (1 + np.geomspace(1e-10, omega_max / e - 1, count // 2)))
    grid = np.unique(np.concatenate(parts))
    grid = grid[grid <= omega_max]
    if isinstance(r, Sinc):
        grid = grid[grid != r.eps]
    return grid


def freq_norm2(c: Cascade, r, omega_max=None, count=4000) -> float:
    """Output 2-norm from the spectrum, sqrt((1/2pi) int |G(jw) R(jw)|^2 dw).

    The integrand is even in w, so the quadrature runs over [0, omega_max]
    and is doubled.
    """
    w = frequency_grid(c, r, omega_max, count)
    s = 1j * w
    integrand = np.abs(eval_transfer(build_transfer(c), s) * r.laplace(s)) ** 2
    return math.sqrt(np.trapezoid(integrand, w) / math.pi)
