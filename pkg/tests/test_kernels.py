import os
import subprocess
import sys

import numpy as np
import pytest

from tradehurst import _kernels

pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@pytest.mark.parametrize("n, J", [(2, 1), (23400, 14), (1025, 10), (4096, 12)])
def test_haar_backends_agree(n, J):
    x = np.random.default_rng(n).standard_normal(n)
    a = _kernels.haar_pyramid_numpy(x, J)
    b = _kernels.haar_pyramid_numba(x, J)
    for u, v in zip(a, b):
        np.testing.assert_allclose(u, v, rtol=1e-14, atol=1e-14)


def test_haar_does_not_mutate_input():
    x = np.arange(16.0)
    _kernels.haar_pyramid_numba(x, 3)
    np.testing.assert_array_equal(x, np.arange(16.0))


def test_bucket_backends_agree():
    rng = np.random.default_rng(0)
    t = np.sort(rng.uniform(34000, 57800, 5000))
    v = rng.integers(1, 10 ** 6, 5000).astype(float)
    a, ca = _kernels.bucket_sum_numpy(t, v, 34200.0, 1.0, 23400)
    b, cb = _kernels.bucket_sum_numba(t, v, 34200.0, 1.0, 23400)
    np.testing.assert_array_equal(a, b)
    assert ca == cb == np.sum((t >= 34200) & (t < 57600))


def test_fisher_yates_backends_agree():
    x = np.random.default_rng(1).standard_normal(1000)
    draws = np.random.default_rng(2).integers(0, np.arange(1000, 1, -1))
    np.testing.assert_array_equal(_kernels.fisher_yates_numpy(x, draws), _kernels.fisher_yates_numba(x, draws))


@pytest.mark.parametrize("flag, backend", [("1", "numpy"), ("", "numba")])
def test_env_flag_selects_backend(flag, backend):
    env = dict(os.environ, TRADEHURST_DISABLE_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", "import tradehurst; print(tradehurst.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == backend


def test_fallback_pipeline_matches():
    code = (
        "from tradehurst import estimate_session, generate, SynthSpec;"
        "print(repr(estimate_session(generate(SynthSpec('fgn', 0.7, 23400, 3))).H))"
    )
    results = {}
    for flag in ("1", "0"):
        env = dict(os.environ, TRADEHURST_DISABLE_NUMBA=flag)
        results[flag] = float(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                             text=True, check=True).stdout)
    assert results["1"] == pytest.approx(results["0"], abs=1e-13)
