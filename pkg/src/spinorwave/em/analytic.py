"""Analytic field closures: exact values and exact derivatives.

Plane waves and pure gauges are first-class inputs so the massless field
equation can be checked to machine precision instead of discretization
error.  Points are arrays of shape (..., 4) in (t, x, y, z).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..core.connecting import ConnectingObjects
from ..core.convention import CONVENTION
from ..errors import GridError
from .fields import BivectorField

_E_UP = np.asarray(CONVENTION.eps_up)
_FLAT = ConnectingObjects.flat()


@dataclass(frozen=True)
class AnalyticPotential:
    """Callable pair: Phi_b(x) of shape (..., 4) and exact d_a Phi_b (..., 4, 4)."""

    value: Callable[[np.ndarray], np.ndarray]
    grad: Callable[[np.ndarray], np.ndarray]


def plane_wave_potential(amplitude: np.ndarray, wavevector: np.ndarray) -> AnalyticPotential:
    """Phi_b(x) = p_b sin(k.x) with k.x = k_a x^a (covector k)."""
    p = np.asarray(amplitude, dtype=float)
    k = np.asarray(wavevector, dtype=float)

    def value(x):
        phase = np.einsum("...a,a->...", np.asarray(x, dtype=float), k)
        return np.sin(phase)[..., None] * p

    def grad(x):
        phase = np.einsum("...a,a->...", np.asarray(x, dtype=float), k)
        return np.cos(phase)[..., None, None] * np.einsum("a,b->ab", k, p)

    return AnalyticPotential(value, grad)


def pure_gauge_potential(k: np.ndarray, scale: float = 1.0) -> AnalyticPotential:
    """Phi = d(chi) for chi = scale * cos(k.x); F vanishes identically."""
    k = np.asarray(k, dtype=float)

    def value(x):
        phase = np.einsum("...a,a->...", np.asarray(x, dtype=float), k)
        return -scale * np.sin(phase)[..., None] * k

    def grad(x):
        phase = np.einsum("...a,a->...", np.asarray(x, dtype=float), k)
        return -scale * np.cos(phase)[..., None, None] * np.einsum("a,b->ab", k, k)

    return AnalyticPotential(value, grad)


def constant_potential(p: np.ndarray) -> AnalyticPotential:
    p = np.asarray(p, dtype=float)
    return AnalyticPotential(
        lambda x: np.broadcast_to(p, np.asarray(x).shape[:-1] + (4,)).copy(),
        lambda x: np.zeros(np.asarray(x).shape[:-1] + (4, 4)),
    )


def field_from_potential(potential: AnalyticPotential, points: np.ndarray) -> BivectorField:
    """F_ab = d_a Phi_b - d_b Phi_a from exact derivatives."""
    grad = potential.grad(points)
    return BivectorField(grad - np.swapaxes(grad, -1, -2))


def field_from_potential_grid(values: np.ndarray, spacing: float) -> BivectorField:
    """Central-difference F on a uniform 4-d grid of Phi samples.

    ``values`` has shape (nt, nx, ny, nz, 4); the returned field is valid on
    interior points only (boundary samples carry zeros and are excluded from
    any residual norm by :func:`interior`).
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 5 or values.shape[-1] != 4:
        raise GridError("grid potential must have shape (nt,nx,ny,nz,4)")
    grad = np.zeros(values.shape[:-1] + (4, 4))
    for axis in range(4):
        if values.shape[axis] < 3:
            if values.shape[axis] == 1:
                continue  # degenerate axis: field constant along it
            raise GridError(f"axis {axis} too small for the central stencil")
        d = np.zeros_like(values)
        sl_p = [slice(None)] * 4
        sl_m = [slice(None)] * 4
        sl_c = [slice(None)] * 4
        sl_p[axis] = slice(2, None)
        sl_m[axis] = slice(0, -2)
        sl_c[axis] = slice(1, -1)
        d[tuple(sl_c)] = (values[tuple(sl_p)] - values[tuple(sl_m)]) / (2.0 * spacing)
        grad[..., axis, :] = d
    return BivectorField(grad - np.swapaxes(grad, -1, -2))


def interior(shape: tuple[int, ...]) -> tuple[slice, ...]:
    """Slices selecting interior points of a grid (singleton axes kept whole)."""
    return tuple(slice(1, -1) if n >= 3 else slice(None) for n in shape)


@dataclass(frozen=True)
class AnalyticWaveFunction:
    """phi_{AB}(x) of shape (..., 2, 2) with exact d_a phi_{AB} (..., 4, 2, 2)."""

    phi: Callable[[np.ndarray], np.ndarray]
    dphi: Callable[[np.ndarray], np.ndarray]


def null_wavevector(alpha: np.ndarray, objects: ConnectingObjects = _FLAT) -> np.ndarray:
    """k_a from the principal spinor: k_{AA'} = alpha_A conj(alpha)_{A'}."""
    alpha = np.asarray(alpha, dtype=complex)
    k_pair = np.einsum("A,B->AB", alpha, np.conj(alpha))
    k = np.einsum("aAB,AB->a", objects.s, k_pair)
    return k.real


def plane_wave_wavefunction(alpha: np.ndarray, wavevector: np.ndarray) -> AnalyticWaveFunction:
    """phi_{AB}(x) = alpha_A alpha_B exp(-i k.x) for a covector k."""
    alpha = np.asarray(alpha, dtype=complex)
    k = np.asarray(wavevector, dtype=float)
    outer = np.einsum("A,B->AB", alpha, alpha)

    def phi(x):
        phase = np.einsum("...a,a->...", np.asarray(x, dtype=float), k)
        return np.exp(-1j * phase)[..., None, None] * outer

    def dphi(x):
        return -1j * np.einsum("a,...AB->...aAB", k, phi(x))

    return AnalyticWaveFunction(phi, dphi)


def massless_residual(wf: AnalyticWaveFunction, points: np.ndarray,
                      objects: ConnectingObjects = _FLAT) -> float:
    """Max-norm of nabla^{AB'} phi_A^B over the sample points (flat space)."""
    x = np.asarray(points, dtype=float)
    d = wf.dphi(x)  # (..., a, A, B) = d_a phi_{AB}
    # d_{CD'} phi = S^a_{CD'} d_a phi; raise to nabla^{AB'} and contract into
    # the mixed wave function phi_A^B = eps^{BX} phi_{AX}
    d_spinor = np.einsum("aCD,...aAB->...CDAB", objects.s_inv, d)
    res = np.einsum("AC,ED,BX,...CDAX->...EB", _E_UP, _E_UP, _E_UP, d_spinor)
    return float(np.max(np.abs(res))) if res.size else 0.0


def massless_residual_grid(phi_values: np.ndarray, spacing: float,
                           objects: ConnectingObjects = _FLAT) -> float:
    """Interior max-norm massless residual from sampled phi_{AB} on a grid.

    ``phi_values`` has shape (nt, nx, ny, nz, 2, 2); central differences of
    order 2, boundary samples excluded.
    """
    phi_values = np.asarray(phi_values, dtype=complex)
    if phi_values.ndim != 6 or phi_values.shape[-2:] != (2, 2):
        raise GridError("grid wave function must have shape (nt,nx,ny,nz,2,2)")
    grid = phi_values.shape[:4]
    d = np.zeros(grid + (4, 2, 2), dtype=complex)
    for axis in range(4):
        if grid[axis] < 3:
            if grid[axis] == 1:
                continue
            raise GridError(f"axis {axis} too small for the central stencil")
        sl_p = [slice(None)] * 4
        sl_m = [slice(None)] * 4
        sl_c = [slice(None)] * 4
        sl_p[axis] = slice(2, None)
        sl_m[axis] = slice(0, -2)
        sl_c[axis] = slice(1, -1)
        d[tuple(sl_c) + (axis,)] = (
            phi_values[tuple(sl_p)] - phi_values[tuple(sl_m)]
        ) / (2.0 * spacing)
    d_spinor = np.einsum("aCD,...aAB->...CDAB", objects.s_inv, d)
    res = np.einsum("AC,ED,BX,...CDAX->...EB", _E_UP, _E_UP, _E_UP, d_spinor)
    core = res[interior(grid)]
    return float(np.max(np.abs(core))) if core.size else 0.0
