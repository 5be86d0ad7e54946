"""Seeded Monte Carlo size/power experiments for the white-noise tests.

A replication is: simulate -> (optionally fit a model and take residuals)
-> test. Replication ``i`` draws from its own seed derived from the
experiment seed and ``i``, so results do not depend on the number of
workers or the order in which replications finish.
"""

import itertools
import json
import logging
import math
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .arma import arma_residuals, css_fit_arma
from .dgp import DgpSpec, replication_seed, simulate
from .errors import ConvergenceError, ExperimentInvalid, InvalidArgument
from .farima import MEAN_MODES, farima_residuals
from .kernels import get_kernel
from .whittle import whittle_fit
from .wntest import MODES, box_pierce_test, default_bandwidth, hong_test

log = logging.getLogger(__name__)

MAX_FAILURE_FRACTION = 0.02
_Z95 = 1.959963984540054
_RULE = re.compile(r"^\s*ceil\(\s*([0-9.]+)\s*\*?\s*n\s*\^\s*\(?\s*1\s*/\s*3\s*\)?\s*\)\s*$")


def wilson_interval(successes, trials, z=_Z95):
    if trials <= 0:
        raise InvalidArgument("need at least one trial")
    p = successes / trials
    denom = 1.0 + z * z / trials
    centre = (p + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


def rejection_rate(decisions):
    """Proportion of ``True`` decisions with a 95% Wilson interval.

    Returns ``(rate, (lo, hi), count)``.
    """
    d = np.asarray(list(decisions), dtype=bool)
    if d.size == 0:
        raise InvalidArgument("no decisions to summarise")
    count = int(d.sum())
    return count / d.size, wilson_interval(count, d.size), count


def parse_m_rule(rule):
    """Return ``(m, c)``: an explicit bandwidth or the constant of ``ceil(c n^(1/3))``."""
    if rule is None or rule == "default":
        return None, 3.0
    if isinstance(rule, bool):
        raise InvalidArgument(f"bad m_rule {rule!r}")
    if isinstance(rule, (int, np.integer)):
        if rule < 1:
            raise InvalidArgument("explicit m must be positive")
        return int(rule), None
    if isinstance(rule, dict) and "c" in rule:
        return None, float(rule["c"])
    if isinstance(rule, str):
        match = _RULE.match(rule)
        if match:
            return None, float(match.group(1))
        if rule.strip().isdigit():
            return int(rule), None
    raise InvalidArgument(f"bad m_rule {rule!r}; use an integer or 'ceil(c*n^(1/3))'")


@dataclass
class McConfig:
    dgp: DgpSpec
    n: int
    reps: int = 1000
    test: str = "hong"
    kernel: str = "bartlett"
    m_rule: object = "default"
    level: float = 0.05
    pipeline: dict = field(default_factory=lambda: {"kind": "raw"})
    seed: int = 0
    mode: str = "finite_sample"
    demean: bool = True
    df_adjust: int = 0

    def __post_init__(self):
        if isinstance(self.dgp, dict):
            self.dgp = DgpSpec.from_dict(self.dgp)
        if isinstance(self.pipeline, str):
            self.pipeline = {"kind": self.pipeline}
        self.n, self.reps, self.seed = int(self.n), int(self.reps), int(self.seed)
        if self.reps < 100:
            raise InvalidArgument("reps must be >= 100")
        if not 0 < self.level < 1:
            raise InvalidArgument("level must lie in (0, 1)")
        if self.test not in ("hong", "box_pierce"):
            raise InvalidArgument(f"test must be 'hong' or 'box_pierce', got {self.test!r}")
        if self.mode not in MODES:
            raise InvalidArgument(f"mode must be one of {MODES}")
        get_kernel(self.kernel)
        parse_m_rule(self.m_rule)
        kind = self.pipeline.get("kind")
        if kind not in ("raw", "fit_arma", "fit_farima"):
            raise InvalidArgument(f"unknown pipeline {kind!r}")
        if kind == "fit_farima" and self.pipeline.get("mean_mode", "known_zero") not in MEAN_MODES:
            raise InvalidArgument("bad mean_mode")

    @property
    def bandwidth(self):
        m, c = parse_m_rule(self.m_rule)
        return m if m is not None else default_bandwidth(self.n, c)

    @classmethod
    def from_dict(cls, obj):
        obj = dict(obj)
        if "m" in obj and "m_rule" not in obj:
            obj["m_rule"] = obj.pop("m")
        return cls(**obj)

    def to_dict(self):
        return {
            "dgp": self.dgp.to_dict(), "n": self.n, "reps": self.reps, "test": self.test,
            "kernel": self.kernel, "m_rule": self.m_rule, "m": self.bandwidth,
            "level": self.level, "pipeline": self.pipeline, "seed": self.seed,
            "mode": self.mode, "demean": self.demean, "df_adjust": self.df_adjust,
        }


@dataclass
class McReport:
    rejection_rate: float
    wilson_ci: tuple
    reps_completed: int
    mean_z: float
    var_z: float
    failures: int
    median_z: float = float("nan")
    rejections: int = 0
    z: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    def to_dict(self):
        return {
            "rejection_rate": self.rejection_rate,
            "ci_lo": self.wilson_ci[0], "ci_hi": self.wilson_ci[1],
            "reps_completed": self.reps_completed, "failures": self.failures,
            "rejections": self.rejections,
            "mean_z": self.mean_z, "var_z": self.var_z, "median_z": self.median_z,
        }


def residuals_for(x, pipeline):
    """Apply the model-fitting step of ``pipeline`` to ``x``."""
    kind = pipeline.get("kind", "raw")
    if kind == "raw":
        return x
    p, q = int(pipeline.get("p", 0)), int(pipeline.get("q", 0))
    if kind == "fit_arma":
        fit = css_fit_arma(x, p, q)
        return arma_residuals(x, fit.params)
    fit = whittle_fit(x, p, q)
    mean_mode = pipeline.get("mean_mode", "known_zero")
    return farima_residuals(x, fit.params, mean_mode)


def run_replication(cfg, index):
    """Statistic and decision for one replication; ``None`` if a fit failed."""
    x = simulate(cfg.dgp, cfg.n, replication_seed(cfg.seed, index))
    try:
        u = residuals_for(x, cfg.pipeline)
    except ConvergenceError:
        return None
    m = cfg.bandwidth
    if cfg.test == "hong":
        out = hong_test(u, cfg.kernel, m, cfg.mode, cfg.demean)
    else:
        out = box_pierce_test(u, m, cfg.df_adjust, cfg.demean)
    return out.z_or_q, out.p_value < cfg.level


def _run_chunk(args):
    cfg, indices = args
    return [(i, run_replication(cfg, i)) for i in indices]


def run_experiment(cfg, workers=1):
    """Run every replication of ``cfg`` and summarise.

    Raises
    ------
    ExperimentInvalid
        If more than 2% of replications failed; the partial report is attached.
    """
    if isinstance(cfg, dict):
        cfg = McConfig.from_dict(cfg)
    indices = range(cfg.reps)
    if workers and workers > 1:
        chunks = [(cfg, list(indices[k::workers])) for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            pairs = [pair for chunk in ex.map(_run_chunk, chunks) for pair in chunk]
        pairs.sort(key=lambda t: t[0])
    else:
        pairs = _run_chunk((cfg, indices))
    results = [r for _, r in pairs]
    ok = [r for r in results if r is not None]
    failures = len(results) - len(ok)
    report = _summarise(ok, failures)
    if failures > MAX_FAILURE_FRACTION * cfg.reps:
        raise ExperimentInvalid(f"{failures} of {cfg.reps} replications failed", report)
    if failures:
        log.warning("%d replications failed and were excluded", failures)
    return report


def _summarise(ok, failures):
    if not ok:
        nan = float("nan")
        return McReport(nan, (nan, nan), 0, nan, nan, failures)
    z = np.array([r[0] for r in ok])
    rate, ci, count = rejection_rate(r[1] for r in ok)
    mean = math.fsum(z) / z.size
    var = math.fsum((z - mean) ** 2) / (z.size - 1) if z.size > 1 else float("nan")
    return McReport(rate, ci, z.size, mean, var, failures, float(np.median(z)), count, z)


# ---------------------------------------------------------------------------
# experiment grids
# ---------------------------------------------------------------------------

def expand_grid(obj):
    """Config cells from ``{"experiments": [...]}``, ``{"base": ..., "grid": ...}`` or a single cell."""
    if "experiments" in obj:
        return [McConfig.from_dict(c) for c in obj["experiments"]]
    if "grid" in obj:
        base = dict(obj.get("base", {}))
        keys = list(obj["grid"])
        cells = []
        for values in itertools.product(*(obj["grid"][k] for k in keys)):
            cell = dict(base)
            cell.update(zip(keys, values))
            cells.append(McConfig.from_dict(cell))
        return cells
    return [McConfig.from_dict(obj)]


TSV_COLUMNS = (
    "dgp", "n", "reps", "test", "kernel", "m", "mode", "level", "pipeline", "seed",
    "rejection_rate", "ci_lo", "ci_hi", "reps_completed", "failures", "rejections",
    "mean_z", "var_z", "median_z",
)


def tsv_row(cfg, report):
    vals = {**cfg.to_dict(), **report.to_dict()}
    vals["dgp"] = json.dumps(vals["dgp"], sort_keys=True)
    vals["pipeline"] = json.dumps(vals["pipeline"], sort_keys=True)
    out = []
    for col in TSV_COLUMNS:
        v = vals[col]
        out.append(repr(float(v)) if isinstance(v, float) else str(v))
    return "\t".join(out)


def tsv_header():
    return "\t".join(TSV_COLUMNS)


def run_grid(obj, out_path=None, workers=1):
    """Run every cell; append rows to ``out_path`` (header written if new). Returns the lines."""
    lines = []
    new_file = out_path is not None and not os.path.exists(out_path)
    if out_path is None or new_file:
        lines.append(tsv_header())
    for cfg in expand_grid(obj):
        lines.append(tsv_row(cfg, run_experiment(cfg, workers)))
    if out_path is not None:
        with open(out_path, "a", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return lines
