"""ARMA(p, q) parameters, residual recursion and conditional-sum-of-squares fit.

Sign convention::

    (1 - alpha_1 B - ... - alpha_p B^p) X_t = (1 + beta_1 B + ... + beta_q B^q) u_t
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import _hot
from ._optim import simplex_minimize
from .errors import InvalidArgument
from .series import as_series

DEFAULT_DELTA = 0.01
BOUNDARY_TOL = 1e-5


@dataclass(frozen=True)
class ArmaParams:
    alpha: tuple = ()
    beta: tuple = ()

    def __post_init__(self):
        a = tuple(float(v) for v in np.atleast_1d(np.asarray(self.alpha, dtype=float)))
        b = tuple(float(v) for v in np.atleast_1d(np.asarray(self.beta, dtype=float)))
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def p(self):
        return len(self.alpha)

    @property
    def q(self):
        return len(self.beta)

    @property
    def ar_poly(self):
        """Coefficients of ``phi(z) = 1 - sum alpha_i z^i`` in increasing powers."""
        return np.r_[1.0, -np.asarray(self.alpha)]

    @property
    def ma_poly(self):
        """Coefficients of ``psi(z) = 1 + sum beta_j z^j`` in increasing powers."""
        return np.r_[1.0, np.asarray(self.beta)]

    def vector(self):
        return np.r_[np.asarray(self.alpha), np.asarray(self.beta)]

    @classmethod
    def from_vector(cls, v, p):
        v = np.asarray(v, dtype=float)
        return cls(v[:p], v[p:])

    @classmethod
    def from_dict(cls, obj):
        return cls(obj.get("alpha", []), obj.get("beta", []))

    def to_dict(self):
        return {"alpha": list(self.alpha), "beta": list(self.beta)}

    def to_json(self):
        return json.dumps(self.to_dict())


def min_root_modulus(poly):
    """Smallest root modulus of ``poly`` (increasing powers); ``inf`` if constant.

    Roots come from the companion-matrix eigenvalues (``np.roots``).
    """
    c = np.trim_zeros(np.asarray(poly, dtype=float), "b")
    if c.size <= 1:
        return np.inf
    return float(np.abs(np.roots(c[::-1])).min())


def check_stability(params, delta=DEFAULT_DELTA):
    """Return ``(ok, margin)`` where ``margin = min root modulus - (1 + delta)``.

    ``ok`` means both the AR and MA polynomial have every root at modulus
    ``>= 1 + delta``.
    """
    if not isinstance(params, ArmaParams):
        params = ArmaParams.from_dict(params)
    rmin = min(min_root_modulus(params.ar_poly), min_root_modulus(params.ma_poly))
    margin = rmin - (1.0 + delta)
    return bool(margin >= 0), float(margin)


def arma_psi_coeffs(params, K):
    """MA(inf) weights of ``psi(z)/phi(z)``: ``x_t = sum_k w_k u_{t-k}``."""
    impulse = np.zeros(int(K) + 1)
    impulse[0] = 1.0
    return _hot.linear_filter(params.ma_poly, params.ar_poly, impulse)


def arma_filter(u, params):
    """ARMA output driven by ``u`` from zero initial values."""
    u = np.ascontiguousarray(u, dtype=float)
    return _hot.linear_filter(params.ma_poly, params.ar_poly, u)


def _residuals(x, params):
    return _hot.linear_filter(params.ar_poly, params.ma_poly, x)


def arma_residuals(x, params, delta=0.0):
    """Residuals ``u_t = X_t - sum alpha_i X_{t-i} - sum beta_j u_{t-j}``.

    Pre-sample values of ``X`` and ``u`` are zero.
    """
    x = as_series(x, min_length=1)
    if not isinstance(params, ArmaParams):
        params = ArmaParams.from_dict(params)
    ok, _ = check_stability(params, delta)
    if not ok:
        raise InvalidArgument("ARMA parameters are not stable/invertible")
    if x.size <= params.p + params.q:
        raise InvalidArgument("series shorter than p + q + 1")
    return _residuals(x, params)


def css_objective(x, params, delta=DEFAULT_DELTA):
    """Sum of squared residuals; ``inf`` outside the admissible region."""
    ok, _ = check_stability(params, delta)
    if not ok:
        return np.inf
    r = _residuals(x, params)
    return float(r @ r)


@dataclass
class ArmaFit:
    params: ArmaParams
    objective: float
    converged: bool = True
    boundary_warning: bool = False
    nfev: int = 0
    extra: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "alpha": list(self.params.alpha),
            "beta": list(self.params.beta),
            "objective": self.objective,
            "converged": self.converged,
            "boundary_warning": self.boundary_warning,
        }


def _css_starts(p, q):
    k = p + q
    return [np.zeros(k), np.full(k, 0.3), np.full(k, -0.3)]


def css_fit_arma(x, p, q, delta=DEFAULT_DELTA):
    """Conditional-sum-of-squares ARMA(p, q) estimate over the admissible region.

    Uses multi-start Nelder-Mead. Raises
    :class:`~wnoise.errors.ConvergenceError` if the budget of
    ``2000 (p + q)`` evaluations runs out.
    """
    x = as_series(x)
    p, q = int(p), int(q)
    if p < 0 or q < 0:
        raise InvalidArgument("p and q must be nonnegative")
    if x.size < 30 * (p + q + 1):
        raise InvalidArgument(f"need n >= {30 * (p + q + 1)} for ARMA({p},{q})")
    if p + q == 0:
        empty = ArmaParams()
        return ArmaFit(empty, float(x @ x))

    def f(v):
        return css_objective(x, ArmaParams.from_vector(v, p), delta)

    res = simplex_minimize(f, _css_starts(p, q), maxfev=2000 * (p + q))
    params = ArmaParams.from_vector(res.x, p)
    _, margin = check_stability(params, delta)
    return ArmaFit(params, res.fun, res.converged, margin < BOUNDARY_TOL, res.nfev)
