import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from wnoise.dgp import DgpSpec, simulate
from wnoise.errors import InvalidArgument
from wnoise.kernels import KERNEL_NAMES, get_kernel
from wnoise.series import sample_acf
from wnoise.wntest import (
    box_pierce_test, chi2_sf, default_bandwidth, hong_test, local_noncentrality, normal_sf,
)


def test_hand_example_asymptotic():
    out = hong_test([1, 2, 3, 4], "truncated", 1, mode="asymptotic")
    assert out.raw == 0.0625
    assert out.scaled == 0.25
    assert out.z_or_q == pytest.approx((0.25 - 1) / math.sqrt(2), abs=1e-15)
    assert out.z_or_q == pytest.approx(-0.5303, abs=1e-4)
    assert out.p_value == pytest.approx(0.5 * math.erfc(out.z_or_q / math.sqrt(2)), abs=1e-12)


def test_hand_example_finite_sample():
    # C_n = 3/4, D_n = 3/4 * 1/2 for n = 4, m = 1, truncated kernel
    out = hong_test([1, 2, 3, 4], "truncated", 1)
    assert out.z_or_q == pytest.approx((0.25 - 0.75) / math.sqrt(0.75), abs=1e-15)


def test_truncated_equals_box_pierce(rng):
    for _ in range(20):
        x = rng.standard_normal(300)
        m = int(rng.integers(1, 40))
        h = hong_test(x, "truncated", m, mode="asymptotic")
        bp = box_pierce_test(x, m)
        assert h.raw == bp.raw
        assert h.z_or_q == (bp.scaled - m) / math.sqrt(2 * m)


def test_outcome_fields(rng):
    x = rng.standard_normal(500)
    out = hong_test(x)
    assert out.m == default_bandwidth(500) == math.ceil(3 * 500 ** (1 / 3))
    assert out.kernel == "bartlett" and out.mode == "finite_sample" and out.n == 500
    assert abs(out.scaled - out.n * out.raw) <= 1e-12 * max(1.0, out.scaled)
    assert 0 <= out.p_value <= 1
    js = out.to_json()
    assert set(js) >= {"statistic", "n_statistic", "z", "p", "m", "kernel", "mode", "n"}


def test_box_pierce_hand_example():
    out = box_pierce_test([1, 2, 3, 4], 1)
    assert out.scaled == 0.25
    assert out.df == 1
    # chi2(1) survival is erfc(sqrt(x / 2))
    assert out.p_value == pytest.approx(math.erfc(math.sqrt(0.125)), abs=1e-12)


def test_box_pierce_df_adjust(rng):
    x = rng.standard_normal(200)
    assert box_pierce_test(x, 10, 2).df == 8
    with pytest.raises(InvalidArgument):
        box_pierce_test(x, 10, 10)
    with pytest.raises(InvalidArgument):
        box_pierce_test(x, 10, -1)


def test_box_pierce_null_mean():
    spec = DgpSpec("iid")
    qs = [box_pierce_test(simulate(spec, 1000, s), 10).scaled for s in range(600)]
    # chi2(10) mean 10, sd sqrt(20); 600 draws -> se 0.18
    assert abs(np.mean(qs) - 10) < 0.8


def test_hong_null_moments():
    spec = DgpSpec("iid")
    z = np.array([hong_test(simulate(spec, 2000, 10_000 + s), "bartlett", 25).z_or_q for s in range(2000)])
    assert abs(z.mean()) < 0.15
    assert 0.8 <= z.var(ddof=1) <= 1.3


def test_argument_errors(rng):
    x = rng.standard_normal(20)
    with pytest.raises(InvalidArgument):
        hong_test(x, "bartlett", 20)
    with pytest.raises(InvalidArgument):
        hong_test(x, "bartlett", 0)
    with pytest.raises(InvalidArgument):
        hong_test(x, "bartlett", 5, mode="chi_square")
    with pytest.raises(InvalidArgument):
        hong_test(x, "bartlett", 1)  # K(1) = 0: no lag carries weight


@pytest.mark.parametrize("z", [-8.0, -3.3, -1.0, 0.0, 0.7, 1.6449, 2.5, 6.0, 12.0])
def test_normal_sf_vs_erfc(z):
    assert abs(normal_sf(z) - 0.5 * math.erfc(z / math.sqrt(2))) <= 1e-7


def test_normal_sf_values():
    assert normal_sf(0) == 0.5
    assert normal_sf(1.6449) == pytest.approx(0.05, abs=1e-5)
    assert abs(normal_sf(-8) - 1) < 1e-7
    with pytest.raises(InvalidArgument):
        normal_sf(float("nan"))


@pytest.mark.parametrize("df", [1, 2, 3, 10, 38, 120])
@pytest.mark.parametrize("x", [0.0, 0.3, 2.0, 5.991, 17.5, 60.0, 150.0])
def test_chi2_sf_vs_mpmath(x, df):
    ref = float(mpmath.gammainc(mpmath.mpf(df) / 2, mpmath.mpf(x) / 2, mpmath.inf, regularized=True))
    assert abs(chi2_sf(x, df) - ref) <= 1e-8


def test_chi2_sf_closed_forms():
    assert chi2_sf(0, 7) == 1.0
    for x in (0.1, 1.0, 5.0, 30.0):
        assert chi2_sf(x, 2) == pytest.approx(math.exp(-x / 2), rel=1e-14)
    assert chi2_sf(5.991, 2) == pytest.approx(math.exp(-2.9955), rel=1e-14)
    assert chi2_sf(5.991, 2) == pytest.approx(0.05, abs=1e-4)
    with pytest.raises(InvalidArgument):
        chi2_sf(-1.0, 3)


def test_local_noncentrality():
    assert local_noncentrality(lambda w: np.zeros_like(w), "bartlett") == 0.0
    assert local_noncentrality(np.cos, "truncated") == pytest.approx(2 * math.pi * math.pi / math.sqrt(2), rel=1e-9)
    assert local_noncentrality(np.cos, "truncated") == pytest.approx(13.96, abs=0.01)
    assert local_noncentrality(np.cos, "bartlett") == pytest.approx(2 * math.pi**2 / math.sqrt(2 / 5), rel=1e-9)
    assert local_noncentrality(np.cos, "bartlett") == pytest.approx(31.21, abs=0.01)
    grid = np.linspace(-math.pi, math.pi, 2001)
    assert local_noncentrality(np.cos(grid), "truncated", grid=grid) == pytest.approx(13.96, abs=0.01)
    with pytest.raises(InvalidArgument):
        local_noncentrality(lambda w: 1 + np.cos(w), "bartlett")


@given(st.integers(0, 10**6), st.integers(-20, 20), st.sampled_from(KERNEL_NAMES))
def test_power_of_two_scaling_bit_for_bit(seed, k, kernel):
    x = np.random.default_rng(seed).standard_normal(64)
    a = hong_test(x, kernel, 8)
    b = hong_test(x * 2.0**k, kernel, 8)
    assert (a.raw, a.z_or_q, a.p_value) == (b.raw, b.z_or_q, b.p_value)


@given(st.integers(0, 10**6), st.floats(0.01, 100), st.floats(-100, 100))
def test_location_scale_invariance(seed, a, b):
    x = np.random.default_rng(seed).standard_normal(80)
    r1 = hong_test(x, "parzen", 9)
    r2 = hong_test(a * x + b, "parzen", 9)
    assert r2.raw == pytest.approx(r1.raw, rel=1e-9, abs=1e-14)
    assert r2.z_or_q == pytest.approx(r1.z_or_q, rel=1e-9, abs=1e-9)


@given(st.integers(0, 10**6), st.sampled_from(KERNEL_NAMES))
def test_raw_nondecreasing_in_m(seed, kernel):
    x = np.random.default_rng(seed).standard_normal(60)
    raws = [hong_test(x, kernel, m).raw for m in range(2, 59)]
    assert all(b >= a - 1e-15 for a, b in zip(raws, raws[1:]))


def test_consistency_drift_under_ar1():
    alpha = 0.3
    k = get_kernel("bartlett")
    target = 0.5 * (2 * alpha**2 / (1 - alpha**2)) / math.sqrt(2 * k.d_k)
    spec = DgpSpec("arma", {"alpha": [alpha]})
    dist = []
    for n in (500, 2000, 8000):
        vals = []
        for s in range(20):
            out = hong_test(simulate(spec, n, 700 + s), k, mode="asymptotic")
            vals.append(math.sqrt(out.m) / n * out.z_or_q)
        dist.append(abs(np.mean(vals) - target))
    assert dist[0] > dist[1] > dist[2]
