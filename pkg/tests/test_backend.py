"""Cross-backend equivalence: the compiled kernel and the NumPy fallback must
agree to rounding on identical inputs."""

import numpy as np
import pytest

from sturmspec import _magnus_py
from sturmspec import backend

compiled = pytest.importorskip("sturmspec._magnus_c",
                               reason="compiled kernel not built")

PI = np.pi


@pytest.fixture(scope="module")
def problem():
    rng = np.random.default_rng(7)
    m = 800
    h = PI / m
    x = np.arange(m) * h
    qg1 = np.sin(2 * x) + 0.3 * rng.standard_normal(m) * 0.0 + x / 7.0
    qg2 = np.sin(2 * (x + 0.4 * h)) + (x + 0.4 * h) / 7.0
    return qg1, qg2, h


def test_backend_is_known():
    assert backend.backend_name() in ("compiled", "python")


@pytest.mark.parametrize("mus", [
    np.array([0.0]),
    np.linspace(-30.0, 430.0, 24),
])
def test_end_state_equivalence(problem, mus):
    qg1, qg2, h = problem
    out_c = compiled.propagate_end(qg1, qg2, h, mus, 1.0, -0.7)
    out_p = _magnus_py.propagate_end(qg1, qg2, h, mus, 1.0, -0.7)
    scale = np.abs(out_p[0]) + np.abs(out_p[1]) + 1.0
    assert np.abs(out_c[0] - out_p[0]).max() <= 1e-12 * scale.max()
    assert np.abs(out_c[1] - out_p[1]).max() <= 1e-12 * scale.max()
    assert np.array_equal(out_c[2], out_p[2])  # crossing counts are integers
    assert np.allclose(out_c[3], out_p[3], atol=1e-12)


@pytest.mark.parametrize("backward", [False, True])
def test_trace_equivalence(problem, backward):
    qg1, qg2, h = problem
    mus = np.array([-4.0, 2.2, 55.5])
    y_c, v_c, ok_c = compiled.propagate_trace(qg1, qg2, h, mus, 1.0, 0.3, backward)
    y_p, v_p, ok_p = _magnus_py.propagate_trace(qg1, qg2, h, mus, 1.0, 0.3, backward)
    assert np.array_equal(ok_c, ok_p)
    scale = np.abs(y_p).max() + np.abs(v_p).max()
    assert np.abs(y_c - y_p).max() <= 1e-12 * scale
    assert np.abs(v_c - v_p).max() <= 1e-12 * scale


def test_rescaling_paths_agree(problem):
    qg1, qg2, h = problem
    mus = np.array([-6.0e5])  # deep enough to trigger magnitude rescaling
    out_c = compiled.propagate_end(qg1, qg2, h, mus, 1.0, 0.0)
    out_p = _magnus_py.propagate_end(qg1, qg2, h, mus, 1.0, 0.0)
    assert out_p[3][0] > 0.0  # rescaling actually happened
    assert np.allclose(out_c[3], out_p[3], rtol=1e-10)
    assert np.allclose(out_c[0], out_p[0], atol=1e-9)
