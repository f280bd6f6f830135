import math

import mpmath
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from cascade_lab import Cascade, DecayingExp, Impulse, Peak, Rect, Sampled, Sinc
from cascade_lab.errors import (DegenerateSignal, IndexOutOfRange, PureIntegrator,
                                UnboundedNorm, UnstableFeedback)
from cascade_lab.metrics import (EXACT, PAPER, compute_metrics, input_moments, input_norm,
                                 sigma0, signal_amplitude, signal_duration, signaling_time,
                                 step_metrics)
from cascade_lab.stability import feedback_stability_bound
from cascade_lab.xfer import hinf_norm
from conftest import cascades, random_cascade, seeded


def test_exp_moments():
    m = input_moments(DecayingExp(1, 1))
    assert (m.m1, m.q) == (-1, 1)


def test_rect_moments():
    m = input_moments(Rect(2, 3))
    assert m.norm2 == pytest.approx(2 * math.sqrt(3))
    assert m.norm2_paper == m.norm2
    assert (m.m1, m.q) == (-1.5, 0.75)


def test_peak_norms_against_quadrature():
    m = input_moments(Peak(5, 2))
    val, _ = integrate.quad(lambda t: (5 * t * math.exp(-2 * t)) ** 2, 0, np.inf)
    assert m.norm2 == pytest.approx(math.sqrt(val), rel=1e-10)
    assert m.norm2 == pytest.approx(0.88388, abs=1e-5)
    assert m.norm2_paper == pytest.approx(0.15625)


@pytest.mark.parametrize("r, transform", [
    (DecayingExp(3, 0.7), lambda s: 3 / (s + sp.Rational(7, 10))),
    (Peak(5, 2), lambda s: 5 / (s + 2) ** 2),
    (Rect(2, 3), lambda s: 2 * (1 - sp.exp(-3 * s)) / s),
])
def test_log_derivatives_symbolic(r, transform):
    s = sp.symbols("s")
    logr = sp.log(transform(s))
    m1 = sp.limit(sp.diff(logr, s), s, 0)
    q = sp.limit(sp.diff(logr, s, 2), s, 0)
    mom = input_moments(r)
    assert mom.m1 == pytest.approx(float(m1), rel=1e-12)
    assert mom.q == pytest.approx(float(q), rel=1e-12)


def test_sinc_moments_high_precision():
    eps = 0.3
    mpmath.mp.dps = 30
    f = lambda s: mpmath.log(mpmath.pi / 2 - mpmath.atan(s / eps))
    mom = input_moments(Sinc(eps))
    assert mom.m1 == pytest.approx(float(mpmath.diff(f, 0)), rel=1e-12)
    assert mom.q == pytest.approx(float(mpmath.diff(f, 0, 2)), rel=1e-6)
    assert mom.q < 0
    # true L2 norm of 2 r sin(eps t)/(pi t) on t >= 0
    r = math.sqrt(math.pi / eps)
    sq = mpmath.quadosc(lambda t: (2 * r * mpmath.sin(eps * t) / (mpmath.pi * t)) ** 2,
                        [0, mpmath.inf], omega=eps)
    assert mom.norm2 == pytest.approx(math.sqrt(float(sq)), rel=1e-8)


def test_sampled_matches_closed_form():
    t = np.linspace(0, 30, 30001)
    r = Peak(5, 2)
    mom = input_moments(Sampled(t, r(t)))
    exact = input_moments(r)
    assert mom.m1 == pytest.approx(exact.m1, rel=1e-6)
    assert mom.q == pytest.approx(exact.q, rel=1e-6)
    assert mom.norm2 == pytest.approx(exact.norm2, rel=1e-6)
    with pytest.raises(DegenerateSignal):
        input_moments(Sampled((0, 1, 2), (0, -1, 0)))


def test_impulse_norm():
    assert input_moments(Impulse()).norm2 == math.inf
    with pytest.raises(UnboundedNorm):
        input_norm(Impulse())
    with pytest.raises(UnboundedNorm):
        signal_amplitude(Cascade.uniform(1, 1, 1), Impulse())
    assert compute_metrics(Cascade.uniform(1, 1, 1), Impulse()).amplitude is None


def test_simple_closed_forms():
    assert signaling_time(Cascade(1, (1,), (2,), 1), Impulse()) == 1.5
    assert signal_duration(Cascade(1, (1,), (1,), 1), Impulse()) == pytest.approx(math.sqrt(2))


def test_ref4_metrics(ref4, ref7):
    r = Peak(5, 2)
    assert signaling_time(ref4, r) == pytest.approx(1 + 4 / 0.7135 + 1, abs=1e-12)
    assert signal_duration(ref4, r) == pytest.approx(3.059, abs=1e-3)
    assert signal_duration(ref7, r) == pytest.approx(3.210, abs=1e-3)
    assert signal_amplitude(ref4, r, PAPER) == pytest.approx(0.409, abs=1e-3)
    assert signal_amplitude(ref7, r, PAPER) == pytest.approx(0.389, abs=1e-3)
    assert signal_amplitude(ref4, r, EXACT) == pytest.approx(2.312, abs=5e-3)
    assert sigma0(ref4) == pytest.approx(7.857, abs=0.01)


def test_sigma0_examples():
    assert sigma0(Cascade.uniform(5, 2.0, 1.0)) == 5
    c = Cascade(3, (1, 1, 1), (0.5, 1.5, 2.0))
    assert sigma0(c.replace(beta=tuple(2 * b for b in c.beta))) == pytest.approx(sigma0(c) / 4)


def test_step_metrics():
    c = Cascade(3, (1, 1, 1), (1, 2, 4), 1)
    tau2, sig2 = step_metrics(c, Impulse(), 2)
    assert tau2 == 1.5 and sig2 == pytest.approx(math.sqrt(1.25))
    taus = [step_metrics(c, Impulse(), i)[0] for i in (1, 2, 3)]
    assert taus == sorted(taus) and len(set(taus)) == 3
    r = Peak(2, 1.5)
    tau_n, sig_n = step_metrics(c, r, 3)
    assert tau_n + 1 / c.leak == pytest.approx(signaling_time(c, r))
    assert math.sqrt(sig_n ** 2 + 1 / c.leak ** 2) == pytest.approx(signal_duration(c, r))
    with pytest.raises(IndexOutOfRange):
        step_metrics(c, r, 4)


def test_pure_integrator():
    c = Cascade(2, (1, 1), (1, 1), leak=0.0)
    with pytest.raises(PureIntegrator):
        signaling_time(c, Impulse())
    assert step_metrics(c, Impulse(), 2)[0] == 2.0


def test_unstable_feedback_metrics():
    with pytest.raises(UnstableFeedback):
        signal_duration(Cascade(2, (1, 2), (1, 1), 1, 0.6), Impulse())


def test_sinc_duration_can_be_degenerate():
    # q(Sinc) = -4/(pi eps)^2 dominates for narrow bands
    with pytest.raises(DegenerateSignal):
        signal_duration(Cascade.uniform(1, 1, 1), Sinc(0.01))


def _symbolic_log_moments(c, r_transform):
    """-(ln Y)'(0) and (ln Y)''(0) for Y = G R, from the rational transfer function."""
    s = sp.symbols("s")
    a = [sp.nsimplify(x) for x in c.alpha]
    b = [sp.nsimplify(x) for x in c.beta]
    eps, leak = sp.nsimplify(c.feedback), sp.nsimplify(c.leak)
    g = sp.Mul(*a) / ((s + leak) * (sp.Mul(*[s + bi for bi in b]) - eps * sp.Mul(*a[1:])))
    logy = sp.log(g * r_transform(s))
    d1 = sp.diff(logy, s)
    return float(-d1.subs(s, 0)), float(sp.diff(d1, s).subs(s, 0))


@pytest.mark.parametrize("seed", range(6))
def test_feedback_moments_symbolic(seed):
    rng = seeded(seed)
    c = random_cascade(rng, n_max=4)
    c = c.replace(feedback=float(np.round(rng.uniform(0.1, 0.9) * feedback_stability_bound(c), 3)))
    tau, var = _symbolic_log_moments(c, lambda s: 3 / (s + 2))
    r = DecayingExp(3, 2)
    assert signaling_time(c, r) == pytest.approx(tau, rel=1e-10)
    assert signal_duration(c, r) ** 2 == pytest.approx(var, rel=1e-10)


@settings(max_examples=100, deadline=None)
@given(cascades(), st.sampled_from([DecayingExp(2, 0.5), Peak(5, 2), Rect(1, 4)]))
def test_duration_identity(c, r):
    s = signal_duration(c, r)
    q = input_moments(r).q
    assert s ** 2 - q == pytest.approx(1 / c.leak ** 2 + sigma0(c), rel=1e-12)
    assert s ** 2 - q == pytest.approx(signal_duration(c, Impulse()) ** 2, rel=1e-12)
    m = compute_metrics(c, r)
    assert m.amplitude * m.sigma == pytest.approx(m.gain * input_norm(r), rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(cascades(n_max=6), st.floats(0.01, 0.99))
def test_feedback_slows_and_spreads(c, frac):
    fb = c.replace(feedback=frac * feedback_stability_bound(c))
    r = Peak(1, 1)
    assert signaling_time(fb, r) > signaling_time(c, r)
    assert signal_duration(fb, r) > signal_duration(c, r)


@settings(max_examples=100, deadline=None)
@given(cascades(n_max=5), cascades(n_max=5))
def test_amplitude_duration_duality(c1, c2):
    # rescale c2's first on-rate so both cascades have the same gain
    k1, k2 = hinf_norm(c1), hinf_norm(c2)
    c2 = c2.replace(alpha=(c2.alpha[0] * k1 / k2,) + c2.alpha[1:])
    r = DecayingExp(1, 1)
    a1, a2 = signal_amplitude(c1, r), signal_amplitude(c2, r)
    s1, s2 = signal_duration(c1, r), signal_duration(c2, r)
    if not math.isclose(s1, s2, rel_tol=1e-9):
        assert (a1 > a2) == (s1 < s2)
