"""Domain types: cascade parameters, input signals and result records."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import InvalidInput, LengthMismatch, NonPositiveRate


def _check_rate(name, value, index=None, allow_zero=False):
    ok = isinstance(value, (int, float)) and math.isfinite(value)
    ok = ok and (value >= 0 if allow_zero else value > 0)
    if not ok:
        raise NonPositiveRate(name, index, value)


def _check_fields(n, alpha, beta, leak, feedback):
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise LengthMismatch(f"n must be a positive integer, got {n!r}")
    if len(alpha) != n or len(beta) != n:
        raise LengthMismatch(
            f"n={n} but got {len(alpha)} on-rates and {len(beta)} off-rates")
    for name, rates in (("alpha", alpha), ("beta", beta)):
        for i, v in enumerate(rates, start=1):
            _check_rate(name, v, i)
    _check_rate("leak", leak, allow_zero=True)
    _check_rate("feedback", feedback, allow_zero=True)


@dataclass(frozen=True)
class Cascade:
    """A weakly activated cascade of ``n`` kinase stages.

    ``alpha`` and ``beta`` are the effective on- and off-rates of each stage,
    ``leak`` is the decay rate of the integrating output stage and
    ``feedback`` the strength of the coupling from the last kinase back into
    the first.  Unstable feedback is accepted here; see
    :func:`cascade_lab.stability.is_stable`.
    """

    n: int
    alpha: tuple
    beta: tuple
    leak: float = 1.0
    feedback: float = 0.0

    def __post_init__(self):
        alpha = tuple(_as_float(a) for a in self.alpha)
        beta = tuple(_as_float(b) for b in self.beta)
        leak = _as_float(self.leak)
        feedback = _as_float(self.feedback)
        _check_fields(self.n, alpha, beta, leak, feedback)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "leak", leak)
        object.__setattr__(self, "feedback", feedback)

    @classmethod
    def uniform(cls, n, alpha, beta, leak=1.0, feedback=0.0):
        return cls(n, (alpha,) * n, (beta,) * n, leak, feedback)

    @property
    def dim(self):
        """Number of state variables, X1..X(n+1)."""
        return self.n + 1

    def replace(self, **changes):
        kw = dict(n=self.n, alpha=self.alpha, beta=self.beta,
                  leak=self.leak, feedback=self.feedback)
        kw.update(changes)
        return Cascade(**kw)


def _as_float(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return float(x)
    return x


def validate(c: Cascade) -> None:
    """Raise if ``c`` violates any cascade invariant, else return None."""
    _check_fields(c.n, c.alpha, c.beta, c.leak, c.feedback)


# --------------------------------------------------------------------------
# Input signals
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Impulse:
    """Unit Dirac pulse at t=0."""

    kind = "impulse"

    def __call__(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def laplace(self, s):
        return np.ones_like(np.asarray(s, dtype=complex))


@dataclass(frozen=True)
class DecayingExp:
    r0: float
    lam: float
    kind = "exp"

    def __post_init__(self):
        _check_signal_param("r0", self.r0)
        _check_signal_param("lambda", self.lam)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t >= 0, self.r0 * np.exp(-self.lam * np.maximum(t, 0)), 0.0)

    def laplace(self, s):
        return self.r0 / (np.asarray(s, dtype=complex) + self.lam)


@dataclass(frozen=True)
class Peak:
    r0: float
    lam: float
    kind = "peak"

    def __post_init__(self):
        _check_signal_param("r0", self.r0)
        _check_signal_param("lambda", self.lam)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        tp = np.maximum(t, 0)
        return np.where(t >= 0, self.r0 * tp * np.exp(-self.lam * tp), 0.0)

    def laplace(self, s):
        return self.r0 / (np.asarray(s, dtype=complex) + self.lam) ** 2


@dataclass(frozen=True)
class Rect:
    """Constant ``r0`` on [0, t0), zero afterwards."""

    r0: float
    t0: float
    kind = "rect"

    def __post_init__(self):
        _check_signal_param("r0", self.r0)
        _check_signal_param("t0", self.t0)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.where((t >= 0) & (t < self.t0), self.r0, 0.0)

    def laplace(self, s):
        s = np.asarray(s, dtype=complex)
        out = np.empty_like(s)
        small = np.abs(s) * self.t0 < 1e-8
        out[small] = self.r0 * self.t0 * (1 - s[small] * self.t0 / 2)
        big = ~small
        out[big] = -self.r0 * np.expm1(-s[big] * self.t0) / s[big]
        return out


@dataclass(frozen=True)
class Sinc:
    """Band-limited test input 2 r sin(eps t) / (pi t), r = sqrt(pi/eps).

    Its spectrum is flat (magnitude ``r``) for |omega| < eps, which makes
    the output norm approach the internal gain as eps -> 0.
    """

    eps: float
    kind = "sinc"

    def __post_init__(self):
        _check_signal_param("eps", self.eps)

    @property
    def r(self):
        return math.sqrt(math.pi / self.eps)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        val = 2 * self.r * self.eps / math.pi * np.sinc(self.eps * t / math.pi)
        return np.where(t >= 0, val, 0.0)

    def laplace(self, s):
        s = np.asarray(s, dtype=complex)
        eps = self.eps
        out = np.empty_like(s)
        axis = s.real == 0
        # arctan(eps/s), continued onto the imaginary axis from the right
        w = s.imag[axis]
        with np.errstate(divide="ignore"):
            log_term = np.log(np.abs((w + eps) / (w - eps)))
        out[axis] = np.where(np.abs(w) < eps, math.pi / 2, 0.0) - 0.5j * log_term
        out[~axis] = np.arctan(eps / s[~axis])
        return 2 * self.r / math.pi * out


@dataclass(frozen=True)
class Sampled:
    """Tabulated input, linearly interpolated and zero outside the table."""

    times: tuple
    values: tuple
    kind = "sampled"

    def __post_init__(self):
        times = tuple(float(x) for x in self.times)
        values = tuple(float(x) for x in self.values)
        if len(times) != len(values):
            raise InvalidInput("sampled input: times and values differ in length")
        if len(times) < 2:
            raise InvalidInput("sampled input needs at least two samples")
        if not all(map(math.isfinite, times + values)):
            raise InvalidInput("sampled input contains non-finite entries")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise InvalidInput("sampled input times must be strictly ascending")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __call__(self, t):
        return np.interp(np.asarray(t, dtype=float), self.times, self.values,
                         left=0.0, right=0.0)

    def laplace(self, s):
        """Exact transform of the piecewise-linear interpolant."""
        s = np.asarray(s, dtype=complex)
        t = np.asarray(self.times)
        v = np.asarray(self.values)
        h = np.diff(t)
        slope = np.diff(v) / h
        z = np.multiply.outer(s, h)
        e0 = np.exp(-np.multiply.outer(s, t[:-1]))
        phi1, phi2 = _phi12(z)
        seg = e0 * (v[:-1] * h * phi1 + slope * h * h * phi2)
        return seg.sum(axis=-1)


def _phi12(z):
    """(1 - e^-z)/z and (1 - e^-z (1 + z))/z^2, with series near z=0."""
    small = np.abs(z) < 1e-2
    zs = np.where(small, 1.0, z)
    with np.errstate(over="ignore", invalid="ignore"):
        phi1 = -np.expm1(-zs) / zs
        phi2 = (-np.expm1(-zs) - zs * np.exp(-zs)) / zs ** 2
    if np.any(small):
        zz = z[small]
        p1 = np.zeros_like(zz)
        p2 = np.zeros_like(zz)
        term = np.ones_like(zz)  # (-z)^k / k!
        for k in range(8):
            p1 += term / (k + 1)
            p2 += term / (k + 2)
            term = term * (-zz) / (k + 1)
        phi1[small] = p1
        phi2[small] = p2
    return phi1, phi2


def _check_signal_param(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise InvalidInput(f"input parameter {name} must be positive, got {value!r}")


InputSignal = Union[Impulse, DecayingExp, Peak, Rect, Sinc, Sampled]


# --------------------------------------------------------------------------
# Result records
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class InputMoments:
    """Strength and log-derivative moments of an input at s=0.

    ``norm2`` is the true L2 norm (``inf`` for the impulse); ``norm2_paper``
    is the tabulated value used to reproduce published amplitudes, which
    differs from ``norm2`` for the exponential, peak and sinc families.
    """

    norm2: float
    norm2_paper: float
    m1: float
    q: float


@dataclass(frozen=True)
class SignalMetrics:
    gain: float
    tau: float
    sigma: float
    amplitude: Union[float, None]
    sigma0: float


@dataclass(frozen=True)
class DesignResult:
    n_star: int
    beta_star: float
    sigma0_star: float
    m_value: float
    mode: str
    feedback: float = 0.0


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled states X1..X(n+1) and the input that drove them."""

    dt: float
    times: np.ndarray
    input: np.ndarray
    states: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.times, self.input, self.states):
            arr.flags.writeable = False

    @property
    def n(self):
        return self.states.shape[1] - 1

    def channel(self, which="output"):
        """Return one sampled signal: ``"input"``, ``"output"`` or a 1-based state index."""
        if which in ("input", "R"):
            return self.input
        if which == "output":
            return self.states[:, -1]
        if isinstance(which, (int, np.integer)) and 1 <= which <= self.states.shape[1]:
            return self.states[:, which - 1]
        raise ValueError(f"unknown channel {which!r}")
