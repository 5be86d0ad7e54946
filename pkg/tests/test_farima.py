import math
import warnings

import numpy as np
import pytest
from scipy.special import gamma

from wnoise.arma import ArmaParams
from wnoise.dgp import DgpSpec, farima_ma_weights, simulate
from wnoise.errors import InvalidArgument
from wnoise.farima import (
    FarimaParams, arma_pi_coeffs, farima_ar_coeffs, farima_residuals, frac_diff_coeffs,
    in_parameter_space,
)
from wnoise.series import sample_acf


def test_frac_diff_examples():
    phi = frac_diff_coeffs(0.3, 2)
    assert phi[0] == 1.0 and phi[1] == -0.3 and phi[2] == -0.105
    for d in (-0.4, 0.0, 0.1, 0.45):
        c = frac_diff_coeffs(d, 1)
        assert c[0] == 1.0 and c[1] == pytest.approx(-d, abs=1e-16)


@pytest.mark.parametrize("d", [-0.3, 0.1, 0.3, 0.45])
def test_frac_diff_gamma_oracle(d):
    s = np.arange(0, 30)
    oracle = gamma(s - d) / (gamma(-d) * gamma(s + 1))
    assert np.allclose(frac_diff_coeffs(d, 29), oracle, rtol=1e-12)


def test_frac_diff_errors():
    with pytest.raises(InvalidArgument):
        frac_diff_coeffs(1.0, 3)
    with pytest.raises(InvalidArgument):
        frac_diff_coeffs(0.2, -1)


def test_pi_coeffs_examples():
    assert np.allclose(arma_pi_coeffs(ArmaParams([0.4, -0.2]), 4), [1, -0.4, 0.2, 0, 0])
    assert np.allclose(arma_pi_coeffs(ArmaParams([], [0.5]), 6), (-0.5) ** np.arange(7))
    assert np.allclose(arma_pi_coeffs(ArmaParams([0.5], [0.4]), 2), [1, -0.9, 0.36])
    with pytest.raises(InvalidArgument):
        arma_pi_coeffs(ArmaParams([1.1]), 3)


def test_ar_coeffs_pure_fractional():
    theta = FarimaParams(0.3)
    assert np.array_equal(farima_ar_coeffs(theta, 50), frac_diff_coeffs(0.3, 50))


def _inverse_identity_deviation(theta, K):
    e = farima_ar_coeffs(theta, K)
    a = farima_ma_weights(theta.d, theta.arma.alpha, theta.arma.beta, K)
    prod = np.convolve(e, a)[: K + 1]
    target = np.zeros(K + 1)
    target[0] = 1.0
    return np.max(np.abs(prod - target))


def test_inverse_identity_d03():
    assert _inverse_identity_deviation(FarimaParams(0.3, ArmaParams([0.5], [0.4])), 2000) < 1e-8
    assert _inverse_identity_deviation(FarimaParams(0.3), 2000) < 1e-8


def test_inverse_identity_random_thetas():
    rng = np.random.default_rng(11)
    for _ in range(10):
        d = rng.uniform(0.01, 0.49)
        a = rng.uniform(-0.8, 0.8, rng.integers(0, 3))
        b = rng.uniform(-0.8, 0.8, rng.integers(0, 3))
        arma = ArmaParams(a, b)
        theta = FarimaParams(d, arma)
        if not in_parameter_space(theta)[0]:
            continue
        assert _inverse_identity_deviation(theta, 2000) < 1e-8


def test_ar_tail_rate():
    d = 0.3
    e = farima_ar_coeffs(FarimaParams(d), 2000)
    k = np.arange(100, 2001)
    scaled = np.abs(e[100:]) * k ** (1 + d)
    # e_k ~ k^(-1-d) / |Gamma(-d)|: bounded and nearly flat
    assert scaled.max() / scaled.min() < 1.05
    assert scaled[-1] == pytest.approx(1 / abs(gamma(-d)), rel=0.01)


def test_prefix_stability():
    theta = FarimaParams(0.25, ArmaParams([0.3], [0.2]))
    assert np.array_equal(farima_ar_coeffs(theta, 400)[:201], farima_ar_coeffs(theta, 200))


@pytest.mark.parametrize("d", [0.1, 0.3, 0.45])
def test_absolute_summability(d):
    e = farima_ar_coeffs(FarimaParams(d), 100_000)
    partial = np.cumsum(np.abs(e))
    assert abs(e[-1]) < 1e-6
    # pure fractional: phi_0 = 1 and the rest sum to -1, so the total is bounded by 2
    assert partial[-1] < 2.0


def test_residual_identity_at_d0():
    y = np.random.default_rng(1).standard_normal(50)
    assert np.array_equal(farima_residuals(y, FarimaParams(0.0)), y)


def test_residual_formula_bruteforce(rng):
    y = rng.standard_normal(30)
    theta = FarimaParams(0.2, ArmaParams([0.3], []))
    e = farima_ar_coeffs(theta, 29)
    brute = [sum(e[j] * y[t - j] for j in range(t + 1)) for t in range(30)]
    assert np.allclose(farima_residuals(y, theta), brute, atol=1e-13)


def test_residuals_white_at_truth():
    n = 4000
    y = simulate(DgpSpec("farima", {"d": 0.3}), n, 17)
    u = farima_residuals(y, FarimaParams(0.3))
    assert np.all(np.abs(sample_acf(u, 20).rho) < 4 / math.sqrt(n))


def test_mean_mode_difference_shrinks():
    spec = DgpSpec("farima", {"d": 0.2})
    theta = FarimaParams(0.2)
    means = []
    for n in (1000, 4000, 16000):
        vals = []
        for s in range(10):
            y = simulate(spec, n, 50 + s)
            diff = farima_residuals(y, theta) - farima_residuals(y, theta, "subtract_sample_mean")
            vals.append(np.max(np.abs(diff)))
        means.append(np.mean(vals))
    assert means[0] > means[1] > means[2]


def test_mean_mode_warning():
    y = np.random.default_rng(2).standard_normal(100)
    with pytest.warns(UserWarning):
        farima_residuals(y, FarimaParams(0.3), "subtract_sample_mean")
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        farima_residuals(y, FarimaParams(0.2), "subtract_sample_mean")
    with pytest.raises(InvalidArgument):
        farima_residuals(y, FarimaParams(0.2), "median")


def test_parameter_space():
    assert in_parameter_space(FarimaParams(0.3))[0]
    assert not in_parameter_space(FarimaParams(0.495))[0]
    assert not in_parameter_space(FarimaParams(0.005))[0]
    assert not in_parameter_space(FarimaParams(0.3, ArmaParams([0.995])))[0]
    assert FarimaParams.from_dict({"d": 0.2, "alpha": [0.1]}).to_dict() == {"d": 0.2, "alpha": [0.1], "beta": []}
