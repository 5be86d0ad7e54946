"""Kernel-weighted portmanteau tests for white noise.

``hong_test`` computes ``T_n = sum_j K^2(j/m) rho_j^2`` and standardises
``n T_n`` to an asymptotically standard normal statistic. The normal limit
holds for uncorrelated but dependent noise (GARCH, bilinear, all-pass, ...)
as long as ``m`` grows with ``n``. ``box_pierce_test`` is the classical
chi-square version with a fixed lag count.
"""

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy import special

from .errors import InvalidArgument
from .kernels import KernelSpec, finite_sample_norms, get_kernel, kernel_weights
from .series import as_series, sample_acf

MODES = ("finite_sample", "asymptotic")
P_FLOOR = 1e-16


@dataclass(frozen=True)
class TestOutcome:
    __test__ = False  # not a pytest class

    raw: float
    scaled: float
    z_or_q: float
    p_value: float
    m: int
    kernel: str
    mode: str
    n: int
    df: Optional[int] = None
    demean: bool = True

    def to_json(self):
        """Dict in the CLI's output layout."""
        out = {
            "statistic": self.raw,
            "n_statistic": self.scaled,
            "z": self.z_or_q,
            "p": self.p_value,
            "m": self.m,
            "kernel": self.kernel,
            "mode": self.mode,
            "n": self.n,
            "demean": self.demean,
        }
        if self.df is not None:
            out["df"] = self.df
        return out

    def as_dict(self):
        return asdict(self)


def default_bandwidth(n, c=3.0):
    """``ceil(c * n^(1/3))``, capped at ``n - 1``."""
    n = int(n)
    m = math.ceil(c * n ** (1.0 / 3.0) - 1e-12)
    return max(1, min(m, n - 1))


def normal_sf(z):
    """Upper tail of the standard normal, ``1 - Phi(z)``."""
    z = float(z)
    if not math.isfinite(z):
        raise InvalidArgument(f"z must be finite, got {z}")
    return float(special.ndtr(-z))


def chi2_sf(x, df):
    """Upper tail of the chi-square distribution with ``df`` degrees of freedom."""
    x = float(x)
    df = int(df)
    if x < 0 or not math.isfinite(x):
        raise InvalidArgument(f"chi-square argument must be finite and >= 0, got {x}")
    if df < 1:
        raise InvalidArgument(f"df must be positive, got {df}")
    return float(special.gammaincc(df / 2.0, x / 2.0))


def _clamp_p(p):
    return min(1.0, max(P_FLOOR, p))


def _check_m(m, n):
    m = int(m)
    if m < 1 or m >= n:
        raise InvalidArgument(f"need 1 <= m < n, got m={m}, n={n}")
    return m


def hong_statistic(rho, k, m):
    """``sum_{j >= 1} K^2(j/m) rho_j^2`` over the supplied autocorrelations."""
    rho = np.asarray(rho, dtype=float)
    lags = np.arange(1, rho.size + 1)
    w = kernel_weights(k, lags / m)
    return math.fsum((w * rho) ** 2)


def hong_test(x, k="bartlett", m=None, mode="finite_sample", demean=True):
    """Hong's kernel test for white noise.

    Parameters
    ----------
    x : array_like
        Observed series or model residuals.
    k : str or KernelSpec
        Lag-window kernel.
    m : int, optional
        Bandwidth; defaults to ``ceil(3 n^(1/3))``.
    mode : {"finite_sample", "asymptotic"}
        Centre and scale with the exact sums ``C_n(K), D_n(K)`` or with
        ``m C(K), m D(K)``.
    demean : bool
        Subtract the sample mean before computing autocorrelations.

    Returns
    -------
    TestOutcome
        ``z_or_q`` is the standardised statistic; the p-value is its upper
        normal tail.
    """
    x = as_series(x, min_length=3)
    n = x.size
    k = k if isinstance(k, KernelSpec) else get_kernel(k)
    m = default_bandwidth(n) if m is None else _check_m(m, n)
    if mode not in MODES:
        raise InvalidArgument(f"mode must be one of {MODES}, got {mode!r}")
    acf = sample_acf(x, m, demean=demean)
    raw = hong_statistic(acf.rho, k, m)
    if mode == "finite_sample":
        centre, scale = finite_sample_norms(k, n, m)
    else:
        centre, scale = m * k.c_k, m * k.d_k
    if not scale > 0:
        raise InvalidArgument(f"kernel {k.kind!r} puts zero weight on every lag at m={m}; increase m")
    scaled = n * raw
    z = (scaled - centre) / math.sqrt(2.0 * scale)
    return TestOutcome(
        raw=raw, scaled=scaled, z_or_q=z, p_value=_clamp_p(normal_sf(z)),
        m=m, kernel=k.kind, mode=mode, n=n, demean=bool(demean),
    )


def box_pierce_test(x, m=None, df_adjust=0, demean=True):
    """Box-Pierce ``Q = n sum_{j<=m} rho_j^2`` against ``chi2(m - df_adjust)``."""
    x = as_series(x, min_length=3)
    n = x.size
    m = default_bandwidth(n) if m is None else _check_m(m, n)
    df_adjust = int(df_adjust)
    if df_adjust < 0 or df_adjust >= m:
        raise InvalidArgument(f"df_adjust must lie in [0, m), got {df_adjust} with m={m}")
    acf = sample_acf(x, m, demean=demean)
    raw = math.fsum(acf.rho**2)
    q = n * raw
    df = m - df_adjust
    return TestOutcome(
        raw=raw, scaled=q, z_or_q=q, p_value=_clamp_p(chi2_sf(q, df)),
        m=m, kernel="truncated", mode="chi_square", n=n, df=df, demean=bool(demean),
    )


def local_noncentrality(g, k, grid=None, tol=1e-6):
    """Mean shift ``2 pi int g^2 / sqrt(2 D(K))`` under a local alternative.

    ``g`` is either a callable on ``[-pi, pi]`` or an array of values on
    ``grid`` (default: 4097 equispaced points spanning ``[-pi, pi]``).
    """
    k = k if isinstance(k, KernelSpec) else get_kernel(k)
    if grid is None:
        grid = np.linspace(-np.pi, np.pi, 4097)
    grid = np.asarray(grid, dtype=float)
    vals = np.asarray(g(grid) if callable(g) else g, dtype=float)
    if vals.shape != grid.shape:
        raise InvalidArgument("g and grid must have the same shape")
    if abs(np.trapezoid(vals, grid)) > tol:
        raise InvalidArgument("g must integrate to zero over [-pi, pi]")
    return 2.0 * np.pi * float(np.trapezoid(vals**2, grid)) / math.sqrt(2.0 * k.d_k)
