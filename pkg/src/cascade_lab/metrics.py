"""Signaling time, signal duration and signal amplitude.

All quantities come from log-derivatives of the output transform at s=0:
tau = -d ln Y/ds and sigma^2 = d^2 ln Y/ds^2.  Because Y = G R, each splits
into a cascade part and an input part (``m1``, ``q`` of the input).
"""
from __future__ import annotations

import math

import numpy as np

from .errors import (DegenerateSignal, IndexOutOfRange, PureIntegrator,
                     UnboundedNorm, UnstableFeedback)
from .model import (Cascade, DecayingExp, Impulse, InputMoments, Peak, Rect,
                    Sampled, SignalMetrics, Sinc)
from .xfer import feedback_term, hinf_norm

EXACT = "exact"
PAPER = "paper"


def _sinc_log_transform(eps, s):
    # ln of (2r/pi)(pi/2 - arctan(s/eps)) along the real axis, up to a constant
    return math.log(math.pi / 2 - math.atan(s / eps))


def input_moments(r) -> InputMoments:
    """2-norm and first two log-derivatives of the input transform at 0."""
    if isinstance(r, Impulse):
        return InputMoments(math.inf, math.inf, 0.0, 0.0)
    if isinstance(r, DecayingExp):
        return InputMoments(norm2=r.r0 / math.sqrt(2 * r.lam),
                            norm2_paper=r.r0 / (2 * r.lam),
                            m1=-1 / r.lam, q=1 / r.lam ** 2)
    if isinstance(r, Peak):
        return InputMoments(norm2=r.r0 / (2 * r.lam ** 1.5),
                            norm2_paper=r.r0 / (4 * r.lam ** 3),
                            m1=-2 / r.lam, q=2 / r.lam ** 2)
    if isinstance(r, Rect):
        norm = r.r0 * math.sqrt(r.t0)
        return InputMoments(norm, norm, -r.t0 / 2, r.t0 ** 2 / 12)
    if isinstance(r, Sinc):
        h = 1e-4 * r.eps
        f0 = _sinc_log_transform(r.eps, 0.0)
        fp = _sinc_log_transform(r.eps, h)
        fm = _sinc_log_transform(r.eps, -h)
        q = (fp - 2 * f0 + fm) / h ** 2
        return InputMoments(norm2=math.sqrt(2.0), norm2_paper=1.0,
                            m1=-2 / (math.pi * r.eps), q=q)
    if isinstance(r, Sampled):
        t = np.asarray(r.times)
        v = np.asarray(r.values)
        area = np.trapezoid(v, t)
        if not area > 0:
            raise DegenerateSignal("sampled input has non-positive area; moments undefined")
        mean = np.trapezoid(t * v, t) / area
        second = np.trapezoid(t * t * v, t) / area
        norm = math.sqrt(np.trapezoid(v * v, t))
        return InputMoments(norm, norm, -float(mean), float(second - mean ** 2))
    raise TypeError(f"not an input signal: {r!r}")


def input_norm(r, convention=EXACT) -> float:
    mom = input_moments(r)
    norm = mom.norm2 if convention == EXACT else mom.norm2_paper
    if not math.isfinite(norm):
        raise UnboundedNorm(f"{type(r).__name__} input has no finite 2-norm")
    return norm


def sigma0(c: Cascade) -> float:
    """Cascade-only part of the squared duration, sum of 1/beta_i^2."""
    return math.fsum(1 / b ** 2 for b in c.beta)


def _stage_terms(c: Cascade):
    """(first, second) log-derivative contributions of the n kinase stages."""
    inv = [1 / b for b in c.beta]
    s1 = math.fsum(inv)
    s2 = math.fsum(x * x for x in inv)
    if c.feedback == 0:
        return s1, s2
    bprod = math.prod(c.beta)
    fb = feedback_term(c)
    den = bprod - fb
    if den <= 0:
        raise UnstableFeedback(
            f"feedback {c.feedback:g} exceeds the stable bound "
            f"(beta product {bprod:.6g} <= feedback term {fb:.6g})")
    cross = s1 * s1 - s2  # sum over ordered pairs i != j of 1/(beta_i beta_j)
    first = bprod * s1 / den
    second = (bprod ** 2 * s2 + fb * bprod * cross) / den ** 2
    return first, second


def _require_leak(c):
    if c.leak == 0:
        raise PureIntegrator(
            "leak=0 makes the output a pure integrator; use step_metrics(c, r, n)")


def signaling_time(c: Cascade, r) -> float:
    _require_leak(c)
    first, _ = _stage_terms(c)
    return 1 / c.leak + first - input_moments(r).m1


def signal_duration(c: Cascade, r) -> float:
    _require_leak(c)
    _, second = _stage_terms(c)
    var = 1 / c.leak ** 2 + second + input_moments(r).q
    if var <= 0:
        raise DegenerateSignal(
            f"squared duration {var:.6g} is not positive for this input")
    return math.sqrt(var)


def signal_amplitude(c: Cascade, r, convention: str = EXACT) -> float:
    """Internal gain times input norm divided by duration.

    ``convention="paper"`` uses the tabulated input norms that reproduce the
    published amplitudes; ``"exact"`` uses true L2 norms.
    """
    if convention not in (EXACT, PAPER):
        raise ValueError(f"unknown norm convention {convention!r}")
    norm = input_norm(r, convention)
    return hinf_norm(c) * norm / signal_duration(c, r)


def step_metrics(c: Cascade, r, i: int):
    """(tau_i, sigma_i) of the i-th kinase, 1 <= i <= n, without feedback."""
    if not 1 <= i <= c.n:
        raise IndexOutOfRange(f"stage index {i} outside 1..{c.n}")
    if c.feedback != 0:
        raise ValueError("per-step metrics are defined for cascades without feedback")
    mom = input_moments(r)
    head = c.beta[:i]
    tau_i = math.fsum(1 / b for b in head) - mom.m1
    var = math.fsum(1 / b ** 2 for b in head) + mom.q
    if var <= 0:
        raise DegenerateSignal(f"squared duration {var:.6g} is not positive")
    return tau_i, math.sqrt(var)


def compute_metrics(c: Cascade, r, convention: str = EXACT) -> SignalMetrics:
    sigma = signal_duration(c, r)
    gain = hinf_norm(c)
    try:
        amp = gain * input_norm(r, convention) / sigma
    except UnboundedNorm:
        amp = None
    return SignalMetrics(gain=gain, tau=signaling_time(c, r), sigma=sigma,
                         amplitude=amp, sigma0=sigma0(c))
