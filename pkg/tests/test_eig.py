import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cascade_lab.eig import MAX_DIM, eigenvalues, hessenberg


def _residuals(a, lams):
    # smallest singular value of (A - lambda I) bounds ||Av - lambda v|| over unit v
    return [np.linalg.svd(a - lam * np.eye(len(a)), compute_uv=False)[-1] for lam in lams]


def _match(ours, ref):
    ours, ref = list(ours), list(ref)
    for z in ref:
        j = int(np.argmin([abs(z - w) for w in ours]))
        yield abs(z - ours.pop(j))


def test_two_by_two_toy():
    ev = sorted(eigenvalues([[-1, 0.6], [2, -1]]).real)
    assert ev == pytest.approx([-1 - np.sqrt(1.2), -1 + np.sqrt(1.2)])


def test_lower_triangular_exact():
    a = np.tril(np.random.default_rng(0).normal(size=(7, 7)))
    assert sorted(eigenvalues(a).real) == sorted(np.diag(a))
    assert not eigenvalues(a).imag.any()


def test_symmetric_real():
    rng = np.random.default_rng(1)
    m = rng.normal(size=(6, 6))
    s = m + m.T
    ev = eigenvalues(s)
    assert np.allclose(ev.imag, 0)
    assert np.allclose(np.sort(ev.real), np.linalg.eigvalsh(s))


def test_rotation_complex_pair():
    ev = eigenvalues([[0, -2], [2, 0]])
    assert sorted(ev.imag) == pytest.approx([-2, 2]) and np.allclose(ev.real, 0)


def test_hessenberg_similarity():
    a = np.random.default_rng(2).normal(size=(8, 8))
    h = hessenberg(a)
    assert np.allclose(np.tril(h, -2), 0)
    assert np.trace(h) == pytest.approx(np.trace(a))
    assert np.linalg.norm(h) == pytest.approx(np.linalg.norm(a))


def test_random_against_numpy():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(1, 13))
        a = rng.normal(size=(n, n)) * rng.choice([1e-3, 1, 1e3])
        ev = eigenvalues(a)
        norm = np.linalg.norm(a, 2)
        assert max(_residuals(a, ev)) <= 1e-8 * norm
        assert max(_match(ev, np.linalg.eigvals(a))) <= 1e-6 * norm


def test_max_dimension():
    a = np.random.default_rng(4).normal(size=(MAX_DIM, MAX_DIM))
    assert max(_residuals(a, eigenvalues(a))) <= 1e-8 * np.linalg.norm(a, 2)
    with pytest.raises(ValueError):
        eigenvalues(np.eye(MAX_DIM + 1))
    with pytest.raises(ValueError):
        eigenvalues(np.ones((2, 3)))
    with pytest.raises(ValueError):
        eigenvalues([[np.nan]])


@settings(max_examples=100, deadline=None)
@given(arrays(float, st.tuples(st.integers(1, 8), st.just(1)).map(lambda t: (t[0], t[0])),
              elements=st.floats(-10, 10)))
def test_residual_property(a):
    ev = eigenvalues(a)
    assert len(ev) == len(a)
    scale = max(np.linalg.norm(a, 2), 1e-300)
    assert max(_residuals(a, ev)) <= 1e-8 * scale + 1e-300


@pytest.mark.parametrize("scale", [1e-180, 1e-20, 1e150])
def test_extreme_scales(scale):
    ev = np.sort(eigenvalues(np.full((2, 2), scale)).real)
    assert ev[0] == pytest.approx(0, abs=1e-14 * scale) and ev[1] == pytest.approx(2 * scale)
