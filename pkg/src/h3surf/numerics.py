"""Shared numerical machinery: finite differences, an adaptive embedded
Runge-Kutta 4(5) integrator with dense output, and convergence-order fits.

The finite-difference routines exist as oracles for the analytic derivative
paths elsewhere in the package; they are never the production path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


class OdeError(RuntimeError):
    """Step-size underflow, non-finite right-hand side, or step budget exhausted."""


# --- finite differences ------------------------------------------------------

_DEFAULT_STEPS = {1: 1e-4, 2: 1e-4, 3: 1e-3}


def central_difference(fn: Callable[[float], float], t: float, order: int, step: float) -> float:
    """Plain central difference of the given order, O(step^2) truncation."""
    h = step
    if order == 1:
        return (fn(t + h) - fn(t - h)) / (2.0 * h)
    if order == 2:
        return (fn(t + h) - 2.0 * fn(t) + fn(t - h)) / (h * h)
    if order == 3:
        return (fn(t + 2 * h) - 2.0 * fn(t + h) + 2.0 * fn(t - h) - fn(t - 2 * h)) / (2.0 * h**3)
    raise ValueError(f"order must be 1, 2 or 3, got {order}")


def fd_derivative(fn: Callable[[float], float], t: float, order: int, step: float | None = None) -> float:
    """Central difference with one Richardson extrapolation (O(step^4)).

    Default steps balance truncation against cancellation in double precision:
    1e-4 for orders 1-2, 1e-3 for order 3.
    """
    if step is None:
        if order not in _DEFAULT_STEPS:
            raise ValueError(f"order must be 1, 2 or 3, got {order}")
        step = _DEFAULT_STEPS[order]
    if step <= 0.0:
        raise ValueError("step must be positive")
    coarse = central_difference(fn, t, order, 2.0 * step)
    fine = central_difference(fn, t, order, step)
    result = (4.0 * fine - coarse) / 3.0
    if not math.isfinite(result):
        raise OdeError(f"non-finite finite-difference sample near t={t}")
    return result


# --- adaptive embedded Runge-Kutta 4(5) --------------------------------------

# Fehlberg tableau; the fifth-order solution is propagated and the 4-5
# difference drives step control (error per unit step).
_C = np.array([0.0, 1 / 4, 3 / 8, 12 / 13, 1.0, 1 / 2])
_A = [
    [],
    [1 / 4],
    [3 / 32, 9 / 32],
    [1932 / 2197, -7200 / 2197, 7296 / 2197],
    [439 / 216, -8.0, 3680 / 513, -845 / 4104],
    [-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40],
]
_B5 = np.array([16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55])
_B4 = np.array([25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0])
_ERR = _B5 - _B4

_MAX_STEPS = 200_000


@dataclass(frozen=True)
class OdeProblem:
    """First-order system y' = rhs(t, y) on [t0, t1] with y(t0) = y0."""

    rhs: Callable[[float, np.ndarray], np.ndarray]
    t0: float
    t1: float
    y0: np.ndarray
    rtol: float = 1e-9
    atol: float = 1e-12

    def __post_init__(self):
        if self.t0 == self.t1:
            raise ValueError("span must be non-degenerate")
        if self.rtol <= 0.0 or self.atol <= 0.0:
            raise ValueError("tolerances must be positive")


class DenseSolution:
    """Accepted mesh plus cubic Hermite interpolation between mesh points."""

    def __init__(self, ts: np.ndarray, ys: np.ndarray, fs: np.ndarray):
        self.ts = ts
        self.ys = ys
        self.fs = fs

    @property
    def mesh(self) -> np.ndarray:
        return self.ts

    def __call__(self, t: float) -> np.ndarray:
        ts = self.ts
        lo, hi = ts[0], ts[-1]
        span = hi - lo
        if t < lo - 1e-12 * abs(span) or t > hi + 1e-12 * abs(span):
            raise ValueError(f"query t={t} outside the solution span [{lo}, {hi}]")
        t = min(max(t, lo), hi)
        i = int(np.searchsorted(ts, t, side="right")) - 1
        i = min(max(i, 0), len(ts) - 2)
        if t == ts[i]:
            return self.ys[i].copy()
        if t == ts[i + 1]:
            return self.ys[i + 1].copy()
        h = ts[i + 1] - ts[i]
        s = (t - ts[i]) / h
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        return (
            h00 * self.ys[i]
            + h10 * h * self.fs[i]
            + h01 * self.ys[i + 1]
            + h11 * h * self.fs[i + 1]
        )


def _rk_step(rhs, t, y, h):
    k = np.empty((6,) + y.shape)
    k[0] = rhs(t, y)
    for i in range(1, 6):
        yi = y + h * sum(_A[i][j] * k[j] for j in range(i))
        k[i] = rhs(t + _C[i] * h, yi)
    y5 = y + h * np.tensordot(_B5, k, axes=1)
    err = h * np.tensordot(_ERR, k, axes=1)
    return y5, err, k[0]


def ode_integrate(problem: OdeProblem) -> DenseSolution:
    """Integrate with error-per-unit-step control; propagates the order-5 solution."""
    forward = problem.t1 > problem.t0
    if forward:
        rhs, t0, t1 = problem.rhs, problem.t0, problem.t1
    else:
        # mirror time so the core always marches forward
        pivot = problem.t0

        def rhs(s, y, _f=problem.rhs, _p=pivot):
            return -np.asarray(_f(2.0 * _p - s, y), dtype=float)

        t0, t1 = problem.t0, 2.0 * problem.t0 - problem.t1

    span = t1 - t0
    y = np.atleast_1d(np.asarray(problem.y0, dtype=float)).copy()
    base_rhs = rhs

    def safe_rhs(t, y_):
        out = np.atleast_1d(np.asarray(base_rhs(t, y_), dtype=float))
        if not np.all(np.isfinite(out)):
            raise OdeError(f"non-finite right-hand side at t={t}")
        return out

    ts = [t0]
    ys = [y.copy()]
    fs = [safe_rhs(t0, y)]

    t = t0
    h = span / 100.0
    hmin = 1e-13 * span

    for _ in range(_MAX_STEPS):
        if t >= t1:
            break
        h = min(h, t1 - t)
        y_new, err, _ = _rk_step(safe_rhs, t, y, h)
        scale = problem.atol + problem.rtol * np.maximum(np.abs(y), np.abs(y_new))
        # error per unit step: local error <= h * scale keeps the global
        # error proportional to the tolerances over the whole span
        enorm = float(np.max(np.abs(err) / scale))
        if enorm <= h:
            t = t + h
            y = y_new
            ts.append(t)
            ys.append(y.copy())
            fs.append(safe_rhs(t, y))
            ratio = (h / enorm) ** 0.25 if enorm > 0.0 else 4.0
            h = h * min(4.0, max(0.2, 0.9 * ratio))
        else:
            h = h * max(0.2, 0.9 * (h / enorm) ** 0.25)
        if h < hmin:
            raise OdeError(f"step size underflow near t={t}")
    else:
        raise OdeError("step budget exhausted")

    ts_arr = np.array(ts)
    ys_arr = np.array(ys)
    fs_arr = np.array(fs)
    if not forward:
        ts_arr = 2.0 * problem.t0 - ts_arr[::-1]
        ys_arr = ys_arr[::-1]
        fs_arr = -fs_arr[::-1]
    return DenseSolution(ts_arr, ys_arr, fs_arr)


def rk4_fixed(rhs, t0: float, y0, t1: float, n_steps: int) -> np.ndarray:
    """Classical fixed-step RK4; used by the convergence-order checks."""
    y = np.atleast_1d(np.asarray(y0, dtype=float)).copy()
    h = (t1 - t0) / n_steps
    t = t0
    for _ in range(n_steps):
        k1 = np.asarray(rhs(t, y))
        k2 = np.asarray(rhs(t + h / 2, y + h / 2 * k1))
        k3 = np.asarray(rhs(t + h / 2, y + h / 2 * k2))
        k4 = np.asarray(rhs(t + h, y + h * k3))
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return y


# --- convergence-order estimation --------------------------------------------

MACHINE_FLOOR = 1e-13


@dataclass(frozen=True)
class OrderEstimate:
    """Least-squares slope of log error against log step (or tolerance)."""

    order: float | None
    exact: bool

    def __str__(self):
        return "exact" if self.exact else f"order {self.order:.2f}"


def convergence_order(steps: Sequence[float], errors: Sequence[float]) -> OrderEstimate:
    if len(steps) < 3 or len(errors) != len(steps):
        raise ValueError("need at least 3 matching ladder points")
    errors = np.asarray(errors, dtype=float)
    steps = np.asarray(steps, dtype=float)
    if np.all(errors <= MACHINE_FLOOR):
        return OrderEstimate(order=None, exact=True)
    slope = float(np.polyfit(np.log(steps), np.log(np.maximum(errors, 1e-300)), 1)[0])
    return OrderEstimate(order=slope, exact=False)
