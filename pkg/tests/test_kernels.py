import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genhilbert import _pykernels, kernels

try:
    from genhilbert import _ckernels
except ImportError:
    _ckernels = None

BACKENDS = [pytest.param(_pykernels, id="python"),
            pytest.param(_ckernels, id="cython",
                         marks=pytest.mark.skipif(_ckernels is None, reason="extension not built"))]


@pytest.mark.parametrize("mod", BACKENDS)
def test_hankel_matvec_against_dense(mod):
    rng = np.random.default_rng(3)
    for n in (1, 2, 5, 33):
        mu = rng.random(2 * n + 3)
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        H = mu[np.add.outer(np.arange(n), np.arange(n))]
        np.testing.assert_allclose(mod.hankel_matvec(mu, a), H @ a, rtol=1e-13, atol=1e-14)


@pytest.mark.parametrize("mod", BACKENDS)
def test_hankel_matvec_needs_enough_moments(mod):
    with pytest.raises(ValueError):
        mod.hankel_matvec(np.ones(4), np.ones(3))


@pytest.mark.parametrize("mod", BACKENDS)
def test_horner_against_polyval(mod):
    rng = np.random.default_rng(4)
    c = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    z = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    out = mod.horner(c, z)
    assert out.shape == (3, 5)
    np.testing.assert_allclose(out, np.polyval(c[::-1], z), rtol=1e-12)


@pytest.mark.parametrize("mod", BACKENDS)
def test_alternating_differences_small_case(mod):
    t = mod.alternating_differences([1.0, 0.5, 1 / 3, 0.25], 8)
    assert t.shape == (9, 4)
    np.testing.assert_allclose(t[1, :3], [0.5, 1 / 6, 1 / 12])
    np.testing.assert_allclose(t[3, 0], 1 / 4)  # (-1)^3 Delta^3 of 1/(n+1) at 0 is 1/4
    assert np.all(np.isnan(t[4:]))


@pytest.mark.skipif(_ckernels is None, reason="extension not built")
@settings(max_examples=50, deadline=None)
@given(st.integers(1, 80), st.integers(0, 2 ** 32 - 1))
def test_backends_agree(n, seed):
    rng = np.random.default_rng(seed)
    mu = rng.random(2 * n - 1)
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    np.testing.assert_allclose(_ckernels.hankel_matvec(mu, a), _pykernels.hankel_matvec(mu, a),
                               rtol=1e-12, atol=1e-12)
    z = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    np.testing.assert_allclose(_ckernels.horner(a, z), _pykernels.horner(a, z), rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(_ckernels.alternating_differences(mu, 6),
                               _pykernels.alternating_differences(mu, 6), rtol=1e-12, atol=1e-14)


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None and not os.environ.get("GENHILBERT_PURE_PYTHON"):
        assert kernels.BACKEND == "cython"


def test_pure_python_fallback_runs_library():
    code = ("import genhilbert as g, numpy as np;"
            "T = g.HankelTruncation.from_measure(g.lebesgue(), 64);"
            "r = g.apply(T, np.ones(64), 'both').residual;"
            "print(g.BACKEND, r < 1e-12)")
    env = dict(os.environ, GENHILBERT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "True"]
