"""Time stepping shared by the reduced and full models.

Two modes: an adaptive embedded Runge-Kutta 4(5) pair (default), and a
fixed-step classic RK4 used when bit-identical output across runs matters
more than step-size efficiency.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp

from .params import StepFailure

ABS_TOL = 1e-10
REL_TOL = 1e-9
FIXED_STEP = 1e-3


def _check_grid(t_grid: np.ndarray) -> np.ndarray:
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0:
        raise ValueError("time grid must be a non-empty 1-d array")
    if t_grid.size > 1 and not np.all(np.diff(t_grid) > 0.0):
        raise ValueError("time grid must be strictly increasing")
    return t_grid


def solve_adaptive(rhs, y0, t_grid, rtol: float = REL_TOL,
                   atol: float = ABS_TOL) -> np.ndarray:
    """Integrate y' = rhs(t, y) and sample on t_grid; returns (len(t), dim)."""
    t_grid = _check_grid(t_grid)
    y0 = np.asarray(y0)
    if t_grid.size == 1:
        return y0[np.newaxis, :].copy()
    sol = solve_ivp(rhs, (t_grid[0], t_grid[-1]), y0, method="RK45",
                    t_eval=t_grid, rtol=rtol, atol=atol)
    if not sol.success:
        raise StepFailure(f"adaptive RK45 failed: {sol.message}")
    return sol.y.T


def solve_fixed_rk4(rhs, y0, t_grid, max_step: float = FIXED_STEP) -> np.ndarray:
    """Classic RK4 with substeps of size <= max_step between grid points.

    Step count per interval depends only on the grid and max_step, so repeat
    runs are bit-identical.
    """
    if not max_step > 0.0:
        raise ValueError(f"max_step must be > 0, got {max_step}")
    t_grid = _check_grid(t_grid)
    y = np.array(y0)
    out = np.empty((t_grid.size,) + y.shape, dtype=y.dtype)
    out[0] = y
    for i in range(t_grid.size - 1):
        t0, t1 = t_grid[i], t_grid[i + 1]
        n_sub = max(1, math.ceil((t1 - t0) / max_step))
        h = (t1 - t0) / n_sub
        t = t0
        for _ in range(n_sub):
            k1 = rhs(t, y)
            k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(t + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += h
        out[i + 1] = y
    return out
