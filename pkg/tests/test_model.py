import math

import numpy as np
import pytest
from scipy import integrate

from cascade_lab import (Cascade, DecayingExp, Impulse, Peak, Rect, Sampled, Sinc,
                         Trajectory, validate)
from cascade_lab.errors import InvalidInput, LengthMismatch, NonPositiveRate


def test_valid_cascade():
    c = Cascade(2, (1, 1), (1, 1), 1, 0)
    validate(c)
    assert c.alpha == (1.0, 1.0) and c.dim == 3


def test_negative_rate_names_field_and_index():
    with pytest.raises(NonPositiveRate) as exc:
        Cascade(2, (1, -1), (1, 1))
    assert exc.value.field == "alpha" and exc.value.index == 2


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        Cascade(3, (1, 1, 1), (1, 1))


@pytest.mark.parametrize("kw", [dict(leak=-1), dict(feedback=-0.1), dict(leak=math.nan)])
def test_bad_scalars(kw):
    with pytest.raises(NonPositiveRate):
        Cascade(1, (1,), (1,), **kw)


def test_zero_leak_and_unstable_feedback_accepted():
    Cascade(1, (1,), (1,), leak=0.0)
    Cascade(2, (1, 5), (1, 1), feedback=10.0)


def test_replace_revalidates():
    c = Cascade.uniform(2, 1.0, 1.0)
    assert c.replace(feedback=0.3).feedback == 0.3
    with pytest.raises(NonPositiveRate):
        c.replace(beta=(1.0, 0.0))


@pytest.mark.parametrize("r", [DecayingExp(2.0, 1.5), Peak(5, 2), Rect(2, 3)])
def test_laplace_matches_quadrature(r):
    for s in (0.3, 1.0, 2.5):
        val, _ = integrate.quad(lambda t: r(t) * math.exp(-s * t), 0, 60, limit=200,
                                points=[getattr(r, "t0", 1.0)])
        assert abs(complex(r.laplace(s)) - val) < 1e-8


def test_sampled_laplace_is_exact():
    r = Sampled((0, 1, 2, 4), (0, 1, 0.2, 0))
    for s in (0.0, 1e-6, 0.5, 2 + 3j, 40j):
        f = lambda t, part: part(r(t) * np.exp(-s * t))
        re = integrate.quad(f, 0, 4, args=(np.real,), points=[1, 2], limit=400)[0]
        im = integrate.quad(f, 0, 4, args=(np.imag,), points=[1, 2], limit=400)[0]
        assert abs(complex(r.laplace(s)) - complex(re, im)) < 1e-12


def test_sinc_time_and_spectrum():
    r = Sinc(0.5)
    assert r(0.0) == pytest.approx(2 * r.r * 0.5 / math.pi)
    assert r(-1.0) == 0.0
    w = np.array([0.1, 0.3])
    assert np.allclose(r.laplace(1j * w).real, r.r)
    assert np.allclose(r.laplace(1j * np.array([0.7, 2.0])).real, 0.0)


def test_sampled_validation_and_interp():
    s = Sampled((0, 1, 2), (0, 2, 0))
    assert s(0.5) == 1.0 and s(5) == 0.0
    with pytest.raises(InvalidInput):
        Sampled((0, 0, 1), (1, 1, 1))
    with pytest.raises(InvalidInput):
        Sampled((0, 1), (1,))
    with pytest.raises(InvalidInput):
        Peak(-1, 2)


def test_impulse_is_zero_after_origin():
    assert Impulse()(np.array([0.5, 1.0])).tolist() == [0.0, 0.0]
    assert Impulse().laplace(3.0) == 1


def test_trajectory_is_read_only():
    tr = Trajectory(0.1, np.arange(3) * 0.1, np.zeros(3), np.zeros((3, 2)))
    with pytest.raises(ValueError):
        tr.states[0, 0] = 1.0
    assert tr.n == 1
    assert tr.channel(2) is not None
    with pytest.raises(ValueError):
        tr.channel(3)
