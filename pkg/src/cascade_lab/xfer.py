"""Transfer function of the linearized cascade and its internal gain."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfiniteGain, PoleEvaluation, UnstableFeedback
from .model import Cascade

POLE_RTOL = 1e-12

@dataclass(frozen=True)
class TransferFunction:
    """G(s) = gain / [(s + leak) * (prod(s + beta_i) - feedback_term)].

    ``pole_offsets`` holds (beta_1, ..., beta_n, leak).
    """

    numerator_gain: float
    pole_offsets: tuple
    feedback_term: float = 0.0

    @property
    def betas(self):
        return self.pole_offsets[:-1]

    @property
    def leak(self):
        return self.pole_offsets[-1]


def _log_prod(xs):
    return math.fsum(math.log(x) for x in xs)


def feedback_term(c: Cascade) -> float:
    """eps * alpha_2 ... alpha_n (the empty product is 1 when n = 1)."""
    if c.feedback == 0:
        return 0.0
    return c.feedback * math.exp(_log_prod(c.alpha[1:]))


def build_transfer(c: Cascade) -> TransferFunction:
    return TransferFunction(
        numerator_gain=math.exp(_log_prod(c.alpha)),
        pole_offsets=tuple(c.beta) + (c.leak,),
        feedback_term=feedback_term(c),
    )


def eval_transfer(tf: TransferFunction, s):
    """Evaluate G at complex ``s`` (scalar or array)."""
    s_arr = np.asarray(s, dtype=complex)
    if tf.feedback_term == 0:
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            den_log = sum(np.log(s_arr + p) for p in tf.pole_offsets)
            out = np.exp(math.log(tf.numerator_gain) - den_log)
        den_abs = np.exp(den_log.real)
    else:
        stages = np.ones_like(s_arr)
        for b in tf.betas:
            stages = stages * (s_arr + b)
        den = (s_arr + tf.leak) * (stages - tf.feedback_term)
        den_abs = np.abs(den)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = tf.numerator_gain / den
    # relative to the size of the denominator's factors, so small-rate cascades are fine
    mag = np.abs(s_arr)
    scale = (mag + tf.leak) * (np.prod([mag + b for b in tf.betas], axis=0) + tf.feedback_term)
    if np.any(den_abs < POLE_RTOL * scale):
        raise PoleEvaluation("transfer function evaluated at or near a pole")
    return out if np.ndim(s) else complex(out)


def truncated_gain(c: Cascade) -> float:
    """Gain alpha_1...alpha_n / (beta_1...beta_n - eps alpha_2...alpha_n) to X_n.

    This is the useful strength bound when ``leak`` is 0 and the full
    internal gain is infinite.
    """
    if c.feedback == 0:
        return math.exp(_log_prod(c.alpha) - _log_prod(c.beta))
    den = math.exp(_log_prod(c.beta)) - feedback_term(c)
    if den <= 0:
        raise UnstableFeedback(
            f"beta product does not exceed feedback term ({den + feedback_term(c):.6g}"
            f" <= {feedback_term(c):.6g})")
    return math.exp(_log_prod(c.alpha)) / den


def hinf_norm(c: Cascade) -> float:
    """Internal gain sup_w |G(jw)|, attained at w = 0."""
    if c.leak == 0:
        raise InfiniteGain(
            "internal gain is infinite for leak=0; the truncated gain to X_n "
            f"is {truncated_gain(c):.9g} (see truncated_gain)")
    if c.feedback == 0:
        tf = build_transfer(c)
        return abs(eval_transfer(tf, 0.0))
    return truncated_gain(c) / c.leak


def amplifies(c: Cascade) -> bool:
    """True iff alpha_1...alpha_n strictly exceeds beta_1...beta_n.

    With feedback the comparison uses the feedback-reduced denominator
    beta_1...beta_n - eps alpha_2...alpha_n.
    """
    if c.feedback == 0:
        return _log_prod(c.alpha) > _log_prod(c.beta)
    return math.exp(_log_prod(c.alpha)) > math.exp(_log_prod(c.beta)) - feedback_term(c)


def frequency_sweep(c: Cascade, omega_max: float, count: int):
    """|G(jw)| on ``count`` points: w=0 followed by a log grid up to ``omega_max``."""
    if count < 2:
        omegas = np.array([0.0])
    else:
        omegas = np.concatenate(
            ([0.0], np.geomspace(omega_max * 1e-6, omega_max, count - 1)))
    mags = np.abs(eval_transfer(build_transfer(c), 1j * omegas))
    return list(zip(omegas.tolist(), mags.tolist()))
