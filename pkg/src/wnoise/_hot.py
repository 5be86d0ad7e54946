"""Inner loops shared by the simulators, residual filters and the ACF.

Each kernel has a numba body (plain loops) and a numpy/scipy fallback. The
public names at the bottom of the module are bound to one of the two
according to :mod:`wnoise._accel`. ``KERNELS`` exposes both for tests and
benchmarks.
"""

import numpy as np
from scipy.signal import lfilter

from ._accel import HAVE_NUMBA, njit


# ---------------------------------------------------------------------------
# loop bodies (compiled by numba when enabled)
# ---------------------------------------------------------------------------

def _acf_sums_loop(xc, max_lag):
    n = xc.shape[0]
    out = np.zeros(max_lag + 1)
    for j in range(max_lag + 1):
        s = 0.0
        for t in range(j, n):
            s += xc[t] * xc[t - j]
        out[j] = s / n
    return out


def _garch11_loop(eps, omega, a, b, s2_init):
    n = eps.shape[0]
    u = np.empty(n)
    s2 = s2_init
    u_prev = 0.0
    for t in range(n):
        if t > 0:
            s2 = omega + a * u_prev * u_prev + b * s2
        u[t] = np.sqrt(s2) * eps[t]
        u_prev = u[t]
    return u


def _bilinear_loop(eps, b):
    n = eps.shape[0]
    u = np.zeros(n)
    for t in range(n):
        v = eps[t]
        if t >= 2:
            v += b * eps[t - 1] * u[t - 2]
        u[t] = v
    return u


def _lfilter_loop(num, den, x):
    # den[0] == 1 assumed; zero initial conditions
    n = x.shape[0]
    nb = num.shape[0]
    na = den.shape[0]
    y = np.empty(n)
    for t in range(n):
        acc = 0.0
        for i in range(nb):
            if t - i < 0:
                break
            acc += num[i] * x[t - i]
        for j in range(1, na):
            if t - j < 0:
                break
            acc -= den[j] * y[t - j]
        y[t] = acc
    return y


def _causal_convolve_loop(w, x):
    n = x.shape[0]
    k = w.shape[0]
    y = np.empty(n)
    for t in range(n):
        acc = 0.0
        top = t if t < k - 1 else k - 1
        for j in range(top + 1):
            acc += w[j] * x[t - j]
        y[t] = acc
    return y


# ---------------------------------------------------------------------------
# numpy / scipy fallbacks
# ---------------------------------------------------------------------------

def _acf_sums_numpy(xc, max_lag):
    n = xc.shape[0]
    out = np.empty(max_lag + 1)
    for j in range(max_lag + 1):
        out[j] = np.dot(xc[j:], xc[: n - j]) / n
    return out


def _lfilter_numpy(num, den, x):
    return lfilter(num, den, x)


def _causal_convolve_numpy(w, x):
    return np.convolve(x, w[: x.shape[0]])[: x.shape[0]]


# garch and bilinear recursions are nonlinear: the fallback is the loop itself

KERNELS = {
    "acf_sums": (_acf_sums_loop, _acf_sums_numpy),
    "garch11": (_garch11_loop, _garch11_loop),
    "bilinear": (_bilinear_loop, _bilinear_loop),
    "lfilter": (_lfilter_loop, _lfilter_numpy),
    "causal_convolve": (_causal_convolve_loop, _causal_convolve_numpy),
}

if HAVE_NUMBA:
    KERNELS = {name: (njit(loop), fallback) for name, (loop, fallback) in KERNELS.items()}

# dot products and np.convolve beat the compiled loops for these two
# (see benchmarks/bench_kernels.py), so they always take the numpy path
_NUMPY_FASTER = ("acf_sums", "causal_convolve")


def _pick(name):
    fast, fallback = KERNELS[name]
    return fast if HAVE_NUMBA and name not in _NUMPY_FASTER else fallback


acf_sums = _pick("acf_sums")
garch11_path = _pick("garch11")
bilinear_path = _pick("bilinear")
linear_filter = _pick("lfilter")
causal_convolve = _pick("causal_convolve")
