"""FARIMA spectral shape and the profiled Whittle estimator."""

from dataclasses import dataclass

import numpy as np

from ._optim import simplex_minimize
from .errors import InvalidArgument
from .farima import D_LOWER, D_UPPER, FarimaParams, in_parameter_space
from .series import as_series, periodogram

D_STARTS = (0.05, 0.15, 0.25, 0.35, 0.45)
BOUNDARY_TOL = 1e-5


def _log_poly_power(poly, lam):
    """``log |poly(e^{-i lam})|^2`` for coefficients in increasing powers."""
    k = np.arange(len(poly))
    z = np.exp(-1j * np.outer(lam, k)) @ np.asarray(poly, dtype=float)
    return np.log(z.real**2 + z.imag**2)


def log_spectral_shape(theta, lam):
    lam = np.asarray(lam, dtype=float)
    out = -theta.d * np.log(4.0 * np.sin(lam / 2.0) ** 2)
    if theta.q:
        out = out + _log_poly_power(theta.arma.ma_poly, lam)
    if theta.p:
        out = out - _log_poly_power(theta.arma.ar_poly, lam)
    return out


def spectral_shape(theta, lam):
    """``|1 - e^{-il}|^{-2d} |psi(e^{-il})|^2 / |phi(e^{-il})|^2``.

    Raises :class:`InvalidArgument` at ``lam = 0`` (a pole when ``d > 0``).
    """
    if not isinstance(theta, FarimaParams):
        theta = FarimaParams.from_dict(theta)
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=float))
    if np.any(lam_arr == 0) or not np.all(np.isfinite(lam_arr)):
        raise InvalidArgument("spectral shape is undefined at frequency 0")
    g = np.exp(log_spectral_shape(theta, lam_arr))
    return float(g[0]) if np.ndim(lam) == 0 else g


def whittle_frequencies(y):
    """Fourier frequencies ``2 pi j / n``, ``j = 1..floor((n-1)/2)``, and periodogram."""
    y = as_series(y, min_length=4)
    freqs, ords = periodogram(y)
    nf = (y.size - 1) // 2
    return freqs[:nf], ords[:nf]


def whittle_objective(theta, freqs, ords):
    """``log(mean(I / g)) + mean(log g)``; the innovation scale is profiled out."""
    lg = log_spectral_shape(theta, freqs)
    return float(np.log(np.mean(ords * np.exp(-lg))) + np.mean(lg))


@dataclass
class WhittleFit:
    params: FarimaParams
    objective: float
    converged: bool = True
    boundary_warning: bool = False
    nfev: int = 0

    def to_json(self):
        return {
            "d": self.params.d,
            "alpha": list(self.params.arma.alpha),
            "beta": list(self.params.arma.beta),
            "objective": self.objective,
            "converged": self.converged,
            "boundary_warning": self.boundary_warning,
        }


def whittle_fit(y, p=0, q=0, delta=0.01, d_lower=D_LOWER, d_upper=D_UPPER):
    """Fit FARIMA(p, d, q) by minimising the profiled Whittle objective.

    Nelder-Mead is started from ``d`` in ``D_STARTS`` with zero ARMA part;
    the lowest objective wins. The zero frequency is excluded, so the fit
    ignores the mean and is invariant to rescaling ``y``.
    """
    y = as_series(y)
    p, q = int(p), int(q)
    if y.size < 200:
        raise InvalidArgument(f"whittle_fit needs n >= 200, got {y.size}")
    if p < 0 or q < 0:
        raise InvalidArgument("p and q must be nonnegative")
    freqs, ords = whittle_frequencies(y)

    def f(v):
        theta = FarimaParams.from_vector(v, p)
        ok, _ = in_parameter_space(theta, delta, d_lower, d_upper)
        if not ok:
            return np.inf
        return whittle_objective(theta, freqs, ords)

    starts = [np.r_[d0, np.zeros(p + q)] for d0 in D_STARTS]
    res = simplex_minimize(f, starts, maxfev=2000 * (1 + p + q))
    theta = FarimaParams.from_vector(res.x, p)
    _, margin = in_parameter_space(theta, delta, d_lower, d_upper)
    return WhittleFit(theta, res.fun, res.converged, margin < BOUNDARY_TOL, res.nfev)


__all__ = ["spectral_shape", "whittle_objective", "whittle_fit", "WhittleFit"]
