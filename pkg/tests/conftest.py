import numpy as np
import pytest
from hypothesis import strategies as st

from cascade_lab import Cascade

REF_ALPHA = 1.2
REF_BETA = 0.7135


@pytest.fixture
def ref4():
    return Cascade.uniform(4, REF_ALPHA, REF_BETA, leak=1.0)


@pytest.fixture
def ref7():
    return Cascade.uniform(7, REF_ALPHA, 0.892, leak=1.0)


def random_cascade(rng, n_max=6, lo=0.3, hi=3.0, leak=True):
    n = int(rng.integers(1, n_max + 1))
    return Cascade(n=n, alpha=tuple(rng.uniform(lo, hi, n)), beta=tuple(rng.uniform(lo, hi, n)),
                   leak=float(rng.uniform(lo, hi)) if leak else 0.0)


rates = st.floats(min_value=0.2, max_value=5.0, allow_nan=False)


@st.composite
def cascades(draw, n_max=8):
    n = draw(st.integers(1, n_max))
    alpha = draw(st.lists(rates, min_size=n, max_size=n))
    beta = draw(st.lists(rates, min_size=n, max_size=n))
    return Cascade(n=n, alpha=tuple(alpha), beta=tuple(beta), leak=draw(rates))


def rel(a, b):
    return abs(a - b) / abs(b)


def seeded(seed=0):
    return np.random.default_rng(seed)
