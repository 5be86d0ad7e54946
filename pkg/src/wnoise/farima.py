"""FARIMA(p, d, q) autoregressive weights and the truncated-AR residuals.

The model is ``(1 - B)^d phi(B) Y_t = psi(B) u_t`` with ``0 < d < 1/2``.
Inverting it gives ``u_t = sum_k e_k Y_{t-k}`` where ``e`` is the
convolution of the ARMA weights of ``phi/psi`` with the fractional
differencing weights ``Gamma(s-d) / (Gamma(-d) Gamma(s+1))``.
"""

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _hot
from .arma import ArmaParams, check_stability
from .errors import InvalidArgument
from .series import as_series

D_LOWER = 0.01
D_UPPER = 0.49
MEAN_MODES = ("known_zero", "subtract_sample_mean")


@dataclass(frozen=True)
class FarimaParams:
    d: float
    arma: ArmaParams = field(default_factory=ArmaParams)

    def __post_init__(self):
        object.__setattr__(self, "d", float(self.d))
        if not isinstance(self.arma, ArmaParams):
            object.__setattr__(self, "arma", ArmaParams.from_dict(self.arma))

    @property
    def p(self):
        return self.arma.p

    @property
    def q(self):
        return self.arma.q

    def vector(self):
        return np.r_[self.d, self.arma.vector()]

    @classmethod
    def from_vector(cls, v, p):
        v = np.asarray(v, dtype=float)
        return cls(v[0], ArmaParams.from_vector(v[1:], p))

    @classmethod
    def from_dict(cls, obj):
        return cls(obj["d"], ArmaParams.from_dict(obj))

    def to_dict(self):
        return {"d": self.d, **self.arma.to_dict()}

    def to_json(self):
        return json.dumps(self.to_dict())


def in_parameter_space(theta, delta=0.01, d_lower=D_LOWER, d_upper=D_UPPER):
    """``(ok, margin)`` for membership in ``[d_lower, d_upper] x`` the ARMA region."""
    ok, margin = check_stability(theta.arma, delta)
    d_margin = min(theta.d - d_lower, d_upper - theta.d)
    return bool(ok and d_margin >= 0), float(min(margin, d_margin))


def frac_diff_coeffs(d, K):
    """Coefficients ``phi_0..phi_K`` of ``(1 - z)^d``.

    ``phi_0 = 1`` and ``phi_s = phi_{s-1} (s - 1 - d) / s``.
    """
    d = float(d)
    K = int(K)
    if not abs(d) < 1:
        raise InvalidArgument(f"need |d| < 1, got {d}")
    if K < 0:
        raise InvalidArgument("K must be nonnegative")
    out = np.empty(K + 1)
    out[0] = 1.0
    for s in range(1, K + 1):
        out[s] = out[s - 1] * ((s - 1 - d) / s)
    return out


def arma_pi_coeffs(params, K):
    """Power-series coefficients ``c_0..c_K`` of ``phi(z) / psi(z)``."""
    if not isinstance(params, ArmaParams):
        params = ArmaParams.from_dict(params)
    ok, _ = check_stability(params, 0.0)
    if not ok:
        raise InvalidArgument("ARMA parameters are not stable/invertible")
    impulse = np.zeros(int(K) + 1)
    impulse[0] = 1.0
    return _hot.linear_filter(params.ar_poly, params.ma_poly, impulse)


def farima_ar_coeffs(theta, K):
    """AR(inf) weights ``e_0..e_K`` with ``u_t = sum_k e_k Y_{t-k}``."""
    K = int(K)
    c = arma_pi_coeffs(theta.arma, K)
    phi = frac_diff_coeffs(theta.d, K)
    if theta.p == 0 and theta.q == 0:
        return phi
    return np.convolve(c, phi)[: K + 1]


def farima_residuals(y, theta, mean_mode="known_zero"):
    """Residuals ``u_t = sum_{j<t} e_j Y_{t-j}`` using only the observed sample.

    With ``mean_mode="subtract_sample_mean"`` the sample mean is removed
    first. That adjustment is only theoretically justified for ``d < 1/4``;
    a :class:`UserWarning` is issued otherwise.
    """
    y = as_series(y, min_length=10)
    if not isinstance(theta, FarimaParams):
        theta = FarimaParams.from_dict(theta)
    if mean_mode not in MEAN_MODES:
        raise InvalidArgument(f"mean_mode must be one of {MEAN_MODES}, got {mean_mode!r}")
    if mean_mode == "subtract_sample_mean":
        if theta.d >= 0.25:
            warnings.warn(
                f"mean adjustment with d = {theta.d:.3f} >= 1/4 may distort the test's null distribution",
                UserWarning, stacklevel=2,
            )
        y = y - y.mean()
    e = farima_ar_coeffs(theta, y.size - 1)
    return _hot.causal_convolve(e, y)


__all__ = [
    "FarimaParams", "frac_diff_coeffs", "arma_pi_coeffs", "farima_ar_coeffs",
    "farima_residuals", "in_parameter_space", "MEAN_MODES",
]
