"""Portmanteau tests for white noise that stay valid under unknown weak dependence."""

__version__ = "0.1.0"

from ._accel import backend
from .arma import ArmaParams, arma_residuals, check_stability, css_fit_arma
from .dgp import DgpSpec, gmc_coupling_estimate, simulate
from .errors import ConvergenceError, DegenerateSeries, ExperimentInvalid, InvalidArgument
from .farima import FarimaParams, farima_ar_coeffs, farima_residuals, frac_diff_coeffs
from .kernels import KernelSpec, finite_sample_norms, get_kernel, kernel_constants, kernel_value
from .mc import McConfig, McReport, run_experiment
from .series import lag_window_spectrum, periodogram, sample_acf
from .whittle import spectral_shape, whittle_fit
from .wntest import TestOutcome, box_pierce_test, chi2_sf, hong_test, normal_sf

__all__ = [
    "ArmaParams", "ConvergenceError", "DegenerateSeries", "DgpSpec", "ExperimentInvalid",
    "FarimaParams", "InvalidArgument", "KernelSpec", "McConfig", "McReport", "TestOutcome",
    "arma_residuals", "backend", "box_pierce_test", "check_stability", "chi2_sf",
    "css_fit_arma", "farima_ar_coeffs", "farima_residuals", "finite_sample_norms",
    "frac_diff_coeffs", "get_kernel", "gmc_coupling_estimate", "hong_test", "kernel_constants",
    "kernel_value", "lag_window_spectrum", "normal_sf", "periodogram", "run_experiment",
    "sample_acf", "simulate", "spectral_shape", "whittle_fit",
]
