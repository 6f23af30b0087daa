import os
import subprocess
import sys

import numpy as np
import pytest

from lapinf import _kernels
from lapinf._backend import USE_NUMBA


def _softmax_case(seed, n=5000, d=3):
    gen = np.random.default_rng(seed)
    points = gen.standard_normal((n, d))
    logw = -np.sum(points**2, axis=1) / 0.05
    logw[::7] = -np.inf
    return points, logw


def _conj_case(seed, q):
    gen = np.random.default_rng(seed)
    Y = gen.uniform(-10, 10, (3000, 2))
    base = -np.sum(np.abs(Y), axis=1) / 1e-2
    X = gen.uniform(-9, 9, (50, 2))
    T = gen.uniform(0.1, 1.0, 50)
    return Y, base, X, T, q, 1e-2


@pytest.mark.skipif(not USE_NUMBA, reason="numba path disabled")
@pytest.mark.parametrize("seed", range(3))
def test_softmax_kernels_agree(seed):
    args = _softmax_case(seed)
    a = _kernels.numpy_kernels["softmax_mean"](*args)
    b = _kernels.numba_kernels["softmax_mean"](*args)
    for x, y in zip(a, b):
        assert np.allclose(x, y, rtol=1e-12, atol=1e-14)


@pytest.mark.skipif(not USE_NUMBA, reason="numba path disabled")
@pytest.mark.parametrize("q", [2.0, 1.25, 11.0])
def test_conjugate_kernels_agree(q):
    args = _conj_case(0, q)
    a = _kernels.numpy_kernels["conjugate_infconv_means"](*args)
    b = _kernels.numba_kernels["conjugate_infconv_means"](*args)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


_SCRIPT = """
import numpy as np
from lapinf._backend import USE_NUMBA
from lapinf.core import RngStream
from lapinf.prox import ProxConfig, prox_laplace
est = prox_laplace(lambda y: np.sum(np.abs(y), axis=-1), [1.5, -0.5], ProxConfig(1.0, 0.1, 20000, RngStream(3)))
print(int(USE_NUMBA), *(repr(float(v)) for v in est.point))
"""


def _run(env_flag):
    env = dict(os.environ)
    env.pop("LAPINF_DISABLE_NUMBA", None)
    if env_flag:
        env["LAPINF_DISABLE_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", _SCRIPT], env=env, capture_output=True, text=True, check=True)
    flag, *vals = out.stdout.split()
    return int(flag), np.array([float(v) for v in vals])


def test_env_flag_selects_numpy_path_with_same_result():
    flag_np, numpy_point = _run(True)
    flag_nb, numba_point = _run(False)
    assert flag_np == 0 and flag_nb == 1
    assert np.allclose(numpy_point, numba_point, rtol=1e-12, atol=1e-14)
