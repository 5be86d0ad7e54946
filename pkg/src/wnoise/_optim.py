"""Multi-start Nelder-Mead over a region given by a feasibility penalty."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import ConvergenceError

XATOL = 1e-8
INITIAL_STEP = 0.1


@dataclass
class SimplexResult:
    x: np.ndarray
    fun: float
    nfev: int
    converged: bool
    start_index: int


def _initial_simplex(f, x0, step):
    dim = x0.size
    sim = np.tile(x0, (dim + 1, 1))
    for i in range(dim):
        h = step
        # halve the step until the vertex is feasible
        for _ in range(30):
            sim[i + 1, i] = x0[i] + h
            if np.isfinite(f(sim[i + 1])):
                break
            sim[i + 1, i] = x0[i] - h
            if np.isfinite(f(sim[i + 1])):
                break
            h *= 0.5
    return sim


def simplex_minimize(f, starts, maxfev):
    """Run Nelder-Mead from every feasible start; keep the lowest objective.

    Reflection/expansion/contraction/shrink coefficients are 1, 2, 0.5, 0.5.
    Stops when the simplex is narrower than ``XATOL`` in every coordinate or
    after ``maxfev`` evaluations. Ties go to the earliest start.

    Raises
    ------
    ConvergenceError
        If no start converged within budget; ``best`` holds the best result.
    """
    best = None
    for idx, x0 in enumerate(starts):
        x0 = np.asarray(x0, dtype=float)
        if not np.isfinite(f(x0)):
            continue
        res = minimize(
            f, x0, method="Nelder-Mead",
            options={
                "xatol": XATOL, "fatol": np.inf, "maxfev": maxfev, "maxiter": maxfev,
                "initial_simplex": _initial_simplex(f, x0, INITIAL_STEP),
            },
        )
        cand = SimplexResult(np.asarray(res.x, dtype=float), float(res.fun), int(res.nfev),
                             bool(res.success), idx)
        if best is None or (cand.converged, -cand.fun) > (best.converged, -best.fun):
            best = cand
    if best is None:
        raise ConvergenceError("no feasible starting point")
    if not best.converged:
        raise ConvergenceError(f"simplex search did not converge in {maxfev} evaluations", best)
    return best
