"""Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) with PI step control.

Works on complex state vectors.  Dense output is cubic Hermite interpolation
on accepted steps, which keeps sampled histories independent of the internal
step sequence details beyond the controlled local error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import IntegrationError

# Dormand-Prince coefficients; the fifth-order solution propagates.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A_ROWS = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_A = np.zeros((7, 7))
for _i, _row in enumerate(_A_ROWS):
    _A[_i, : len(_row)] = _row
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_ALPHA = 0.7 / 5.0   # PI controller exponents for a 5th-order pair
_BETA = 0.4 / 5.0


@dataclass
class IntegrationResult:
    t: np.ndarray        # requested sample points
    y: np.ndarray        # states at the sample points, shape (n, dim)
    steps: int           # accepted steps
    rejected: int


def integrate(f: Callable[[float, np.ndarray], np.ndarray], t0: float,
              y0: np.ndarray, t_samples: np.ndarray, rtol: float = 1e-9,
              atol: float = 1e-12, max_steps: int = 1_000_000) -> IntegrationResult:
    """Integrate y' = f(t, y) from t0 through every point of ``t_samples``.

    ``t_samples`` must be increasing and start at or after ``t0``.  Raises
    :class:`IntegrationError` with the last good time on step underflow.
    """
    t_samples = np.asarray(t_samples, dtype=float)
    y = np.asarray(y0, dtype=complex)
    t = float(t0)
    t_end = float(t_samples[-1])
    out = np.empty((len(t_samples), y.size), dtype=complex)
    next_sample = 0
    while next_sample < len(t_samples) and t_samples[next_sample] <= t:
        out[next_sample] = y
        next_sample += 1

    k = np.empty((7, y.size), dtype=complex)
    dy = f(t, y)
    h = _initial_step(f, t, y, dy, rtol, atol, t_end - t)
    err_prev = 1.0
    steps = rejected = 0

    while t < t_end:
        if steps + rejected >= max_steps:
            raise IntegrationError("step budget exhausted", last_eta=t)
        h = min(h, t_end - t)
        if h <= abs(t) * 1e-15 or h <= 1e-300:
            raise IntegrationError("step size underflow", last_eta=t)
        k[0] = dy
        bad = False
        with np.errstate(over="ignore", invalid="ignore"):
            for i in range(1, 7):
                yi = y + h * (_A[i, :i] @ k[:i])
                k[i] = f(t + _C[i] * h, yi)
                if not np.all(np.isfinite(k[i])):
                    bad = True
                    break
        if bad:
            rejected += 1
            h *= 0.5
            continue
        y5 = y + h * (_B5 @ k)
        y4 = y + h * (_B4 @ k)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
        err = float(np.sqrt(np.mean((np.abs(y5 - y4) / scale) ** 2)))
        if err <= 1.0 or h <= abs(t) * 1e-13:
            t_new = t + h
            dy_new = k[6] if _C[6] == 1.0 else f(t_new, y5)
            while next_sample < len(t_samples) and t_samples[next_sample] <= t_new:
                out[next_sample] = _hermite(
                    t, y, k[0], t_new, y5, dy_new, float(t_samples[next_sample])
                )
                next_sample += 1
            t, y, dy = t_new, y5, dy_new
            steps += 1
            factor = _SAFETY * (err + 1e-16) ** (-_ALPHA) * err_prev ** _BETA
            err_prev = max(err, 1e-16)
            h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
        else:
            rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * err ** (-1.0 / 5.0))
    while next_sample < len(t_samples):
        out[next_sample] = y
        next_sample += 1
    return IntegrationResult(t_samples, out, steps, rejected)


def _hermite(t0, y0, f0, t1, y1, f1, ts):
    h = t1 - t0
    if h == 0.0:
        return y1
    s = (ts - t0) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1


def _initial_step(f, t, y, dy, rtol, atol, span):
    scale = atol + rtol * np.abs(y)
    d0 = float(np.sqrt(np.mean((np.abs(y) / scale) ** 2)))
    d1 = float(np.sqrt(np.mean((np.abs(dy) / scale) ** 2)))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, abs(span))
    y1 = y + h0 * dy
    d2 = float(
        np.sqrt(np.mean((np.abs(f(t + h0, y1) - dy) / scale) ** 2))
    ) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / 5.0)
    return min(100 * h0, h1, abs(span))
