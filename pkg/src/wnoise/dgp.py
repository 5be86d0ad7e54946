"""Seeded simulators for dependent white noise and the linear models built on it.

Every process is written as a deterministic map from an iid driving
sequence to the output, started from a zero (or unconditional) state. The
map is what :func:`simulate` runs after a burn-in, and what
:func:`gmc_coupling_estimate` runs twice with shared recent innovations but
independent pasts.

Supported ``kind`` values and their JSON parameters:

- ``iid``: ``dist`` = ``normal`` | ``student_t`` (with ``nu > 2``, scaled to unit variance)
- ``garch11``: ``omega > 0``, ``a >= 0``, ``b >= 0``, ``a + b < 1``;
  ``u_t = s_t e_t``, ``s_t^2 = omega + a u_{t-1}^2 + b s_{t-1}^2``
- ``bilinear``: ``b``, ``sigma``; ``u_t = e_t + b e_{t-1} u_{t-2}``
- ``allpass11``: ``phi`` with ``0 < |phi| < 1``, ``sigma``;
  ``u_t = phi u_{t-1} + e_t - e_{t-1} / phi``
- ``nlma``: ``beta``, ``sigma``; ``u_t = beta e_{t-1} e_{t-2} + e_t``

``bilinear``, ``allpass11`` and ``nlma`` draw ``e_t`` from ``dist`` (``normal`` by
default, or ``student_t`` with ``nu``), scaled to standard deviation ``sigma``.
With Gaussian ``e_t`` the all-pass process is Gaussian and white, hence iid;
it is dependent only for non-Gaussian innovations.
- ``arma``: ``alpha``, ``beta`` lists and a nested ``innovation`` spec
- ``weak_arma_subsampled``: ``a``, ``b``; ``X_t - a X_{t-1} = e_t - b e_{t-1}``, output ``X_{2t}``
- ``noncausal_ma1``: ``phi`` with ``|phi| > 1``; ``X_t = e_t - phi e_{t-1}``
- ``farima``: ``d``, ``alpha``, ``beta``, nested ``innovation``; truncated MA(inf) with 5000 lags

GARCH moment caveat: the normal limit of the kernel test is proved under
eight finite moments, which confines GARCH(1,1) to small ``a``; nothing here
enforces that.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.signal import fftconvolve

from . import _hot
from .errors import InvalidArgument

MASK64 = (1 << 64) - 1
FARIMA_MA_LAGS = 5000
MIN_BURN_IN = 1000

KINDS = (
    "iid", "garch11", "bilinear", "allpass11", "nlma", "arma",
    "weak_arma_subsampled", "noncausal_ma1", "farima",
)

_DEFAULTS = {
    "iid": {"dist": "normal"},
    "garch11": {"omega": 0.05, "a": 0.05, "b": 0.90},
    "bilinear": {"b": 0.5, "sigma": 1.0, "dist": "normal"},
    "allpass11": {"phi": 0.5, "sigma": 1.0, "dist": "normal"},
    "nlma": {"beta": 0.5, "sigma": 1.0, "dist": "normal"},
    "arma": {"alpha": [], "beta": []},
    "weak_arma_subsampled": {"a": 0.9, "b": 0.3},
    "noncausal_ma1": {"phi": 2.0},
    "farima": {"d": 0.3, "alpha": [], "beta": []},
}


def splitmix64(x):
    """64-bit finaliser used to derive replication seeds."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def replication_seed(seed, index):
    """Seed for replication ``index`` of an experiment seeded with ``seed``."""
    return (int(seed) ^ splitmix64(int(index))) & MASK64


def make_rng(seed):
    return np.random.default_rng(int(seed) & MASK64)


@dataclass(frozen=True)
class DgpSpec:
    kind: str
    params: dict = field(default_factory=dict)
    innovation: Optional["DgpSpec"] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgument(f"unknown dgp kind {self.kind!r}")
        merged = dict(_DEFAULTS[self.kind])
        merged.update(self.params)
        object.__setattr__(self, "params", merged)
        if self.kind in ("arma", "farima") and self.innovation is None:
            object.__setattr__(self, "innovation", DgpSpec("iid"))
        _validate(self)

    def __hash__(self):
        return hash(json.dumps(self.to_dict(), sort_keys=True))

    def __getitem__(self, key):
        return self.params[key]

    @classmethod
    def from_dict(cls, obj):
        obj = dict(obj)
        try:
            kind = obj.pop("kind")
        except KeyError:
            raise InvalidArgument("dgp spec needs a 'kind'") from None
        inner = obj.pop("innovation", None)
        inner = cls.from_dict(inner) if isinstance(inner, dict) else inner
        return cls(kind, obj, inner)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        out = {"kind": self.kind, **self.params}
        if self.innovation is not None:
            out["innovation"] = self.innovation.to_dict()
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _validate(spec):
    p = spec.params
    k = spec.kind
    if "dist" in p:
        if p["dist"] not in ("normal", "student_t"):
            raise InvalidArgument(f"dist must be normal or student_t, got {p['dist']!r}")
        if p["dist"] == "student_t" and not float(p.get("nu", 0)) > 2:
            raise InvalidArgument("student_t innovations need nu > 2")
    if k == "garch11":
        omega, a, b = float(p["omega"]), float(p["a"]), float(p["b"])
        if omega <= 0 or a < 0 or b < 0:
            raise InvalidArgument("garch11 needs omega > 0, a >= 0, b >= 0")
        if a + b >= 1:
            raise InvalidArgument(f"garch11 needs a + b < 1 for stationarity, got {a + b}")
    elif k in ("bilinear", "allpass11", "nlma"):
        if float(p["sigma"]) <= 0:
            raise InvalidArgument("sigma must be positive")
        if k == "bilinear" and not abs(float(p["b"])) < 1:
            raise InvalidArgument("bilinear needs |b| < 1")
        if k == "allpass11" and not 0 < abs(float(p["phi"])) < 1:
            raise InvalidArgument("allpass11 needs 0 < |phi| < 1")
    elif k in ("arma", "farima"):
        from .arma import ArmaParams, check_stability

        ok, _ = check_stability(ArmaParams(p["alpha"], p["beta"]), 1e-8)
        if not ok:
            raise InvalidArgument("arma/farima polynomials must have roots outside the unit circle")
        if k == "farima" and not 0 < float(p["d"]) < 0.5:
            raise InvalidArgument(f"farima needs 0 < d < 1/2, got {p['d']}")
        if spec.innovation.kind in ("farima", "weak_arma_subsampled"):
            raise InvalidArgument("innovation must be a white-noise process")
    elif k == "weak_arma_subsampled":
        a, b = float(p["a"]), float(p["b"])
        if not (-1 < a < 1 and -1 < b < 1) or a == b:
            raise InvalidArgument("weak_arma_subsampled needs a != b in (-1, 1)")
    elif k == "noncausal_ma1":
        if not abs(float(p["phi"])) > 1:
            raise InvalidArgument("noncausal_ma1 needs |phi| > 1")


# ---------------------------------------------------------------------------
# driving noise and deterministic maps
# ---------------------------------------------------------------------------

def _drivers_per_obs(spec):
    if spec.kind == "weak_arma_subsampled":
        return 2
    if spec.kind in ("arma", "farima"):
        return _drivers_per_obs(spec.innovation)
    return 1


def _memory(spec):
    k = spec.kind
    if k in ("arma", "farima"):
        p = spec.params
        return max(len(p["alpha"]), len(p["beta"])) + _memory(spec.innovation)
    return {"iid": 0, "garch11": 1, "bilinear": 2, "allpass11": 1, "nlma": 2,
            "weak_arma_subsampled": 1, "noncausal_ma1": 1}[k]


def burn_in(spec):
    return max(MIN_BURN_IN, 50 * _memory(spec))


def draw_drivers(spec, rng, size):
    """iid driving innovations for ``spec``."""
    if spec.kind in ("arma", "farima"):
        return draw_drivers(spec.innovation, rng, size)
    p = spec.params
    sigma = float(p.get("sigma", 1.0))
    if p.get("dist") == "student_t":
        nu = float(p["nu"])
        return sigma * math.sqrt((nu - 2.0) / nu) * rng.standard_t(nu, size)
    return sigma * rng.standard_normal(size)


def apply_map(spec, eps):
    """Run the process recursion on drivers ``eps`` from a zero state.

    ``farima`` is excluded: it is not a finite-state recursion.
    """
    eps = np.ascontiguousarray(eps, dtype=float)
    p = spec.params
    k = spec.kind
    if k == "iid":
        return eps.copy()
    if k == "garch11":
        omega, a, b = float(p["omega"]), float(p["a"]), float(p["b"])
        return _hot.garch11_path(eps, omega, a, b, omega / (1.0 - a - b))
    if k == "bilinear":
        return _hot.bilinear_path(eps, float(p["b"]))
    if k == "allpass11":
        phi = float(p["phi"])
        return _hot.linear_filter(np.array([1.0, -1.0 / phi]), np.array([1.0, -phi]), eps)
    if k == "nlma":
        u = eps.copy()
        u[2:] += float(p["beta"]) * eps[1:-1] * eps[:-2]
        return u
    if k == "arma":
        u = apply_map(spec.innovation, eps)
        num = np.r_[1.0, np.asarray(p["beta"], dtype=float)]
        den = np.r_[1.0, -np.asarray(p["alpha"], dtype=float)]
        return _hot.linear_filter(num, den, u)
    if k == "weak_arma_subsampled":
        a, b = float(p["a"]), float(p["b"])
        x = _hot.linear_filter(np.array([1.0, -b]), np.array([1.0, -a]), eps)
        return x[1::2]  # X_2, X_4, ... when eps starts at X_1
    if k == "noncausal_ma1":
        phi = float(p["phi"])
        x = eps.copy()
        x[1:] -= phi * eps[:-1]
        return x
    raise InvalidArgument(f"{k} has no finite-state recursion")


def farima_ma_weights(d, alpha, beta, lags=FARIMA_MA_LAGS):
    """MA(inf) weights ``a_0..a_lags`` of ``(1-B)^-d psi(B)/phi(B)``."""
    from .arma import ArmaParams, arma_psi_coeffs
    from .farima import frac_diff_coeffs

    frac = frac_diff_coeffs(-d, lags)
    psi = arma_psi_coeffs(ArmaParams(alpha, beta), lags)
    return np.convolve(psi, frac)[: lags + 1]


def simulate(spec, n, seed):
    """Simulate ``n`` observations of ``spec``; deterministic in ``(spec, n, seed)``."""
    if isinstance(spec, dict):
        spec = DgpSpec.from_dict(spec)
    n = int(n)
    if n < 2:
        raise InvalidArgument(f"n must be >= 2, got {n}")
    return simulate_rng(spec, n, make_rng(seed))


def simulate_rng(spec, n, rng):
    if spec.kind == "farima":
        p = spec.params
        weights = farima_ma_weights(float(p["d"]), p["alpha"], p["beta"])
        u = simulate_rng(spec.innovation, n + FARIMA_MA_LAGS, rng)
        return fftconvolve(u, weights, mode="valid")
    burn = burn_in(spec)
    per = _drivers_per_obs(spec)
    eps = draw_drivers(spec, rng, per * (burn + n))
    return apply_map(spec, eps)[burn:]


# ---------------------------------------------------------------------------
# helpers for the weak-ARMA examples
# ---------------------------------------------------------------------------

def subsampled_ma_theta(a, b):
    """``theta`` in the MA(1) form ``u_t - theta u_{t-1}`` of ``Y_t - a^2 Y_{t-1}``.

    ``Y_t = X_{2t}`` with ``X_t - a X_{t-1} = e_t - b e_{t-1}``; the invertible
    root is returned.
    """
    g0 = 1.0 + (a - b) ** 2 + (a * b) ** 2
    r = a * b / g0
    if r == 0:
        return 0.0
    return (1.0 - math.sqrt(1.0 - 4.0 * r * r)) / (2.0 * r)


def noncausal_innovations(x, phi):
    """``u_t = sum_{i>=0} phi^-i X_{t-i}`` (from a zero start)."""
    return _hot.linear_filter(np.array([1.0]), np.array([1.0, -1.0 / phi]), np.asarray(x, dtype=float))


# ---------------------------------------------------------------------------
# empirical geometric-moment contraction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CouplingReport:
    alpha: float
    lags: np.ndarray
    moment_estimates: np.ndarray
    exact_coupling: bool
    coupling_lag: Optional[int]
    slope: Optional[float]
    slope_se: Optional[float]
    rho_hat: Optional[float]

    def to_json(self):
        return {
            "alpha": self.alpha,
            "lags": [int(v) for v in self.lags],
            "moment_estimates": [float(v) for v in self.moment_estimates],
            "exact_coupling": self.exact_coupling,
            "coupling_lag": self.coupling_lag,
            "slope": self.slope,
            "slope_se": self.slope_se,
            "rho_hat": self.rho_hat,
        }


def _fit_log_slope(lags, moments, floor):
    keep = moments > floor
    x = lags[keep].astype(float)
    if x.size < 3:
        return None, None
    y = np.log(moments[keep])
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ (y - y.mean())) / sxx
    resid = y - y.mean() - slope * xc
    se = math.sqrt(float(resid @ resid) / (x.size - 2) / sxx)
    return slope, se


def gmc_coupling_estimate(spec, alpha=2.0, max_n=30, reps=1000, seed=0, floor=1e-12):
    """Monte Carlo estimate of ``E|u_n - u'_n|^alpha`` for ``n = 1..max_n``.

    ``u'`` is driven by the same innovations from time 1 onward but by an
    independent pre-sample past. A negative log-linear slope means the
    process forgets its past geometrically. When the coupled paths agree
    bit-for-bit from some lag on in every replication, ``exact_coupling``
    is set and no slope is fitted.
    """
    if isinstance(spec, dict):
        spec = DgpSpec.from_dict(spec)
    alpha = float(alpha)
    if alpha not in (1.0, 2.0, 4.0, 8.0):
        raise InvalidArgument(f"alpha must be one of 1, 2, 4, 8, got {alpha}")
    max_n, reps = int(max_n), int(reps)
    if max_n < 10:
        raise InvalidArgument("max_n must be >= 10")
    if reps < 100:
        raise InvalidArgument("reps must be >= 100")
    if spec.kind == "farima":
        raise InvalidArgument("farima is long-memory; no geometric coupling to estimate")
    per = _drivers_per_obs(spec)
    pre = per * burn_in(spec)
    post = per * max_n
    rng = make_rng(seed)
    sums = np.zeros(max_n)
    identical = np.ones(max_n, dtype=bool)
    for _ in range(reps):
        past = draw_drivers(spec, rng, pre)
        past2 = draw_drivers(spec, rng, pre)
        shared = draw_drivers(spec, rng, post)
        u = apply_map(spec, np.concatenate([past, shared]))[-max_n:]
        v = apply_map(spec, np.concatenate([past2, shared]))[-max_n:]
        diff = np.abs(u - v)
        identical &= diff == 0.0
        sums += diff**alpha
    moments = sums / reps
    lags = np.arange(1, max_n + 1)
    coupling_lag = None
    if identical[-1]:
        first = max_n - int(np.argmin(identical[::-1])) if not identical.all() else 0
        coupling_lag = int(first + 1)
    if coupling_lag is not None:
        return CouplingReport(alpha, lags, moments, True, coupling_lag, None, None, None)
    slope, se = _fit_log_slope(lags, moments, floor)
    rho_hat = None if slope is None else math.exp(slope)
    return CouplingReport(alpha, lags, moments, False, None, slope, se, rho_hat)
