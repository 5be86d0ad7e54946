"""Sample moments of a univariate series: ACF, periodogram, lag-window spectrum."""

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from . import _hot
from .errors import DegenerateSeries, InvalidArgument
from .kernels import kernel_weights

# direct O(n * max_lag) summation below this work size, FFT above
FFT_THRESHOLD = 10**7


def as_series(x, min_length=2):
    """Validate ``x`` as a finite 1-d float array of length >= ``min_length``."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        if arr.ndim == 2 and 1 in arr.shape:
            arr = arr.ravel()
        else:
            raise InvalidArgument("series must be one-dimensional")
    if arr.size < min_length:
        raise InvalidArgument(f"series needs at least {min_length} values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgument("series contains non-finite values")
    return np.ascontiguousarray(arr)


@dataclass(frozen=True)
class AcfResult:
    r0: float
    rho: np.ndarray  # rho[j - 1] is the lag-j autocorrelation
    demeaned: bool

    @property
    def max_lag(self):
        return self.rho.size

    def at(self, j):
        """Autocorrelation at lag ``j`` (``j = 0`` gives 1)."""
        j = abs(int(j))
        if j == 0:
            return self.r0 / self.r0
        return float(self.rho[j - 1])


def _autocov_fft(xc, max_lag):
    n = xc.size
    nfft = 1 << int(math.ceil(math.log2(2 * n - 1)))
    f = np.fft.rfft(xc, nfft)
    acov = np.fft.irfft(f * np.conj(f), nfft)[: max_lag + 1]
    return acov / n


def autocovariances(x, max_lag, demean=True, method="auto"):
    """``R(0), ..., R(max_lag)`` with the ``1/n`` normalisation."""
    x = as_series(x)
    n = x.size
    max_lag = int(max_lag)
    if max_lag < 0 or max_lag >= n:
        raise InvalidArgument(f"max_lag must lie in [0, n-1], got {max_lag} for n={n}")
    xc = x - x.mean() if demean else x
    if method == "auto":
        method = "fft" if n * max_lag > FFT_THRESHOLD else "direct"
    if method == "fft":
        return _autocov_fft(xc, max_lag)
    if method == "direct":
        return _hot.acf_sums(xc, max_lag)
    raise InvalidArgument(f"unknown method {method!r}")


def sample_acf(x, max_lag, demean=True, method="auto"):
    """Empirical autocorrelations at lags ``1..max_lag``.

    Raises
    ------
    DegenerateSeries
        If the lag-0 autocovariance is zero (e.g. a constant series).
    """
    max_lag = int(max_lag)
    if max_lag < 1:
        raise InvalidArgument(f"max_lag must be positive, got {max_lag}")
    acov = autocovariances(x, max_lag, demean=demean, method=method)
    r0 = float(acov[0])
    if not r0 > 0.0:
        raise DegenerateSeries("series has zero sample variance")
    return AcfResult(r0=r0, rho=acov[1:] / r0, demeaned=bool(demean))


def periodogram(x, demean=True):
    """Periodogram ordinates at the Fourier frequencies ``2 pi j / n``, ``j = 1..n-1``.

    Returns ``(freqs, ordinates)`` with ``I(l) = |sum_t x_t e^{-itl}|^2 / (2 pi n)``.
    """
    x = as_series(x, min_length=4)
    n = x.size
    xc = x - x.mean() if demean else x
    dft = np.fft.fft(xc)[1:]
    freqs = 2.0 * np.pi * np.arange(1, n) / n
    return freqs, (dft.real**2 + dft.imag**2) / (2.0 * np.pi * n)


def lag_window_from_acf(rho, k, m, lam):
    """Lag-window spectral estimate from autocorrelations ``rho[0] = rho(1), ...``.

    ``lam`` may be a scalar or an array of frequencies.
    """
    rho = np.asarray(rho, dtype=float)
    m = int(m)
    lags = np.arange(1, rho.size + 1)
    keep = lags <= m  # compact support
    lags = lags[keep]
    w = kernel_weights(k, lags / m) * rho[keep]
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=float))
    vals = (1.0 + 2.0 * np.cos(np.outer(lam_arr, lags)) @ w) / (2.0 * np.pi)
    return float(vals[0]) if np.ndim(lam) == 0 else vals


def lag_window_spectrum(x, k, m, lam, demean=True):
    """Normalised spectral density estimate ``f_n(lam)`` using kernel ``k`` and bandwidth ``m``."""
    x = as_series(x)
    m = int(m)
    if m < 1 or m >= x.size:
        raise InvalidArgument(f"need 1 <= m < n, got m={m}, n={x.size}")
    acf = sample_acf(x, m, demean=demean)
    return lag_window_from_acf(acf.rho, k, m, lam)


# ---------------------------------------------------------------------------
# text I/O
# ---------------------------------------------------------------------------

def parse_series(text):
    """Parse one value per line, or a single-column CSV with an optional header."""
    values = []
    rows = list(csv.reader(io.StringIO(text)))
    for i, row in enumerate(rows):
        cells = [c.strip() for c in row if c.strip()]
        if not cells:
            continue
        if len(cells) != 1:
            raise InvalidArgument(f"line {i + 1}: expected one value, got {len(cells)}")
        try:
            values.append(float(cells[0]))
        except ValueError:
            if values or i != next(j for j, r in enumerate(rows) if any(c.strip() for c in r)):
                raise InvalidArgument(f"line {i + 1}: cannot parse {cells[0]!r}") from None
            # first non-empty line is a header
    return as_series(values)


def read_series(path):
    with open(path, encoding="utf-8") as fh:
        return parse_series(fh.read())


def format_series(x):
    """One value per line, 17 significant digits (round-trips exactly)."""
    return "".join(f"{v:.17g}\n" for v in np.asarray(x, dtype=float))


def format_acf(acf):
    return "".join(f"{j}\t{r:.17g}\n" for j, r in enumerate(acf.rho, start=1))
