"""Compact-support lag-window kernels and their norming constants.

Four kernels are provided, selected by lowercase name:

========== ==========================================
truncated  ``1(|x| <= 1)``
bartlett   ``1 - |x|``
parzen     ``1 - 6x^2 + 6|x|^3`` on ``|x| <= 1/2``, ``2(1 - |x|)^3`` on ``1/2 < |x| <= 1``
tukey      ``(1 + cos(pi x)) / 2`` (Tukey-Hanning)
========== ==========================================

All vanish outside ``[-1, 1]``. ``C(K) = int_0^inf K^2`` and
``D(K) = int_0^inf K^4`` are stored as exact rationals.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidArgument

_CONSTANTS = {
    "truncated": (Fraction(1), Fraction(1)),
    "bartlett": (Fraction(1, 3), Fraction(1, 5)),
    "parzen": (Fraction(151, 560), Fraction(122559, 640640)),
    "tukey": (Fraction(3, 8), Fraction(35, 128)),
}

KERNEL_NAMES = tuple(_CONSTANTS)


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    c_k: float
    d_k: float

    def __call__(self, x):
        return kernel_value(self, x)


def get_kernel(name):
    """Return the :class:`KernelSpec` for ``name`` (case-insensitive)."""
    key = str(name).strip().lower()
    if key == "tukey_hanning":
        key = "tukey"
    if key not in _CONSTANTS:
        raise InvalidArgument(f"unknown kernel {name!r}; choose from {', '.join(KERNEL_NAMES)}")
    c, d = _CONSTANTS[key]
    return KernelSpec(key, float(c), float(d))


def _as_spec(k):
    return k if isinstance(k, KernelSpec) else get_kernel(k)


def kernel_weights(k, x):
    """Vectorised kernel evaluation; ``x`` may be any array-like."""
    k = _as_spec(k)
    x = np.abs(np.asarray(x, dtype=float))
    inside = x <= 1.0
    if k.kind == "truncated":
        out = np.where(inside, 1.0, 0.0)
    elif k.kind == "bartlett":
        out = np.where(inside, 1.0 - x, 0.0)
    elif k.kind == "parzen":
        lo = 1.0 - 6.0 * x**2 + 6.0 * x**3
        hi = 2.0 * (1.0 - x) ** 3
        out = np.where(x <= 0.5, lo, np.where(inside, hi, 0.0))
    else:
        out = np.where(inside, 0.5 * (1.0 + np.cos(np.pi * x)), 0.0)
    return out


def kernel_value(k, x):
    """``K(x)`` for a single finite real ``x``."""
    x = float(x)
    if not math.isfinite(x):
        raise InvalidArgument(f"kernel argument must be finite, got {x}")
    return float(kernel_weights(k, x))


def kernel_constants(k):
    """Return ``(C(K), D(K))``."""
    k = _as_spec(k)
    return k.c_k, k.d_k


def finite_sample_norms(k, n, m):
    """Finite-sample centring and scaling sums ``(C_n(K), D_n(K))``.

    ``C_n = sum_{j=1}^{n-1} (1 - j/n) K^2(j/m)`` and
    ``D_n = sum_{j=1}^{n-2} (1 - j/n)(1 - (j+1)/n) K^4(j/m)``.
    """
    k = _as_spec(k)
    n = int(n)
    m = int(m)
    if n < 3:
        raise InvalidArgument(f"n must be >= 3, got {n}")
    if m < 1 or m >= n:
        raise InvalidArgument(f"need 1 <= m < n, got m={m}, n={n}")
    # compact support: only j <= m contribute
    top = min(n - 1, m)
    j = np.arange(1, top + 1, dtype=float)
    w2 = kernel_weights(k, j / m) ** 2
    c_n = math.fsum((n - j) / n * w2)
    jd = j[j <= n - 2]
    w4 = w2[: jd.size] ** 2
    d_n = math.fsum((n - jd) * (n - jd - 1.0) / (n * n) * w4)
    return c_n, d_n
