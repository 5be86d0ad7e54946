import json
import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.signal import lfilter

from wnoise import _hot
from wnoise._accel import HAVE_NUMBA, backend


def _py(fn):
    return getattr(fn, "py_func", fn)


@pytest.fixture
def data():
    rng = np.random.default_rng(11)
    return rng.standard_normal(3000)


def _args(name, x):
    if name == "acf_sums":
        return (x - x.mean(), 40)
    if name == "garch11":
        return (x, 0.05, 0.05, 0.90, 1.0)
    if name == "bilinear":
        return (x, 0.4)
    if name == "lfilter":
        return (np.array([1.0, -0.5, 0.2]), np.array([1.0, 0.3]), x)
    if name == "causal_convolve":
        return (0.9 ** np.arange(5000.0), x)
    raise KeyError(name)


@pytest.mark.parametrize("name", sorted(_hot.KERNELS))
def test_paths_agree(name, data):
    fast, slow = _hot.KERNELS[name]
    args = _args(name, data)
    a, b, c = fast(*args), slow(*args), _py(fast)(*args)
    scale = max(1.0, float(np.max(np.abs(b))))
    assert np.max(np.abs(a - b)) <= 1e-12 * scale * np.sqrt(data.size)
    assert np.max(np.abs(c - b)) <= 1e-12 * scale * np.sqrt(data.size)


def test_loop_oracles(data):
    x = data[:200]
    xc = x - x.mean()
    ref = np.array([xc[: 200 - j] @ xc[j:] for j in range(11)]) / 200
    assert np.allclose(_hot.acf_sums(xc, 10), ref, rtol=1e-13, atol=1e-12)
    num, den = np.array([1.0, 0.4]), np.array([1.0, -0.7, 0.1])
    assert np.allclose(_hot.linear_filter(num, den, x), lfilter(num, den, x), rtol=1e-13, atol=1e-13)


def test_backend_flag():
    assert backend() == ("numba" if HAVE_NUMBA else "numpy")
    code = (
        "import json, numpy as np; from wnoise import hong_test; from wnoise._accel import backend;"
        "x = np.random.default_rng(5).standard_normal(500);"
        "print(json.dumps([backend(), hong_test(x, 'parzen').z_or_q]))"
    )
    out = {}
    for flag in ("1", "0"):
        env = dict(os.environ, WNOISE_DISABLE_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        out[flag] = json.loads(res.stdout)
    assert out["1"][0] == "numpy"
    assert out["1"][1] == pytest.approx(out["0"][1], abs=1e-10)
