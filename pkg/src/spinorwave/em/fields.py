"""Maxwell bivector <-> photon wave-function conversions and diagnostics.

Values are batched over an arbitrary leading sample shape; the trailing axes
are the tensor/spinor components.  The extraction normalization is fixed so
that ``phi_AB = (1/2) F_{A C' B}^{C'}`` inverts the reconstruction
``F_{AA'BB'} = eps_{A'B'} phi_{AB} + eps_{AB} conj_phi_{A'B'}`` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core.connecting import ConnectingObjects, levi_civita4
from ..core.convention import CONVENTION
from ..errors import BivectorError, SpinorSymmetryError

_E_LO = np.asarray(CONVENTION.eps_low)
_E_UP = np.asarray(CONVENTION.eps_up)

_FLAT = ConnectingObjects.flat()


@dataclass(frozen=True)
class BivectorField:
    """Antisymmetric world tensor samples, shape (..., 4, 4)."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values)
        if arr.shape[-2:] != (4, 4):
            raise BivectorError(f"trailing axes must be (4,4), got {arr.shape}")
        if not np.array_equal(arr, -np.swapaxes(arr, -1, -2)):
            raise BivectorError("bivector samples are not exactly antisymmetric")
        object.__setattr__(self, "values", arr)


@dataclass(frozen=True)
class PotentialField:
    """World covector samples, shape (..., 4)."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values)
        if arr.shape[-1:] != (4,):
            raise BivectorError(f"trailing axis must be (4,), got {arr.shape}")
        object.__setattr__(self, "values", arr)


@dataclass(frozen=True)
class PhotonWaveFunction:
    """Symmetric spinor samples phi_{AB} (..., 2, 2) plus the primed sector."""

    phi: np.ndarray
    phi_conj: np.ndarray

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=complex)
        conj = np.asarray(self.phi_conj, dtype=complex)
        for name, arr in (("phi", phi), ("phi_conj", conj)):
            if arr.shape[-2:] != (2, 2):
                raise SpinorSymmetryError(f"{name} trailing axes must be (2,2)")
            if not np.array_equal(arr, np.swapaxes(arr, -1, -2)):
                raise SpinorSymmetryError(f"{name} is not exactly symmetric")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "phi_conj", conj)

    @classmethod
    def physical(cls, phi: np.ndarray) -> "PhotonWaveFunction":
        phi = np.asarray(phi, dtype=complex)
        return cls(phi, np.conj(phi))

    def mixed(self) -> np.ndarray:
        """phi_A^B = eps^{BX} phi_{AX}; trace-free for symmetric phi."""
        return np.einsum("BX,...AX->...AB", _E_UP, self.phi)


@dataclass(frozen=True)
class StressEnergy:
    """Real symmetric trace-free world tensor samples, shape (..., 4, 4)."""

    values: np.ndarray


def _to_spinor_pairs(F: np.ndarray, objects: ConnectingObjects) -> np.ndarray:
    """F_ab -> F_{A A' B B'} via the inverse connecting objects."""
    return np.einsum("aAC,bBD,...ab->...ACBD", objects.s_inv, objects.s_inv, F)


def spinors_from_bivector(field: BivectorField,
                          objects: ConnectingObjects = _FLAT) -> PhotonWaveFunction:
    """Extract phi_{AB} (and the primed sector) from an antisymmetric F."""
    F = field.values
    Fs = _to_spinor_pairs(F, objects)
    phi = 0.5 * np.einsum("...ACBD,CD->...AB", Fs, _E_UP)
    conj = 0.5 * np.einsum("...ACBD,AB->...CD", Fs, _E_UP)
    phi = 0.5 * (phi + np.swapaxes(phi, -1, -2))
    conj = 0.5 * (conj + np.swapaxes(conj, -1, -2))
    return PhotonWaveFunction(phi, conj)


def bivector_from_spinors(wf: PhotonWaveFunction,
                          objects: ConnectingObjects = _FLAT) -> BivectorField:
    """F_{AA'BB'} = eps_{A'B'} phi_{AB} + eps_{AB} conj_{A'B'}, in world indices."""
    Fs = (
        np.einsum("CD,...AB->...ACBD", _E_LO, wf.phi)
        + np.einsum("AB,...CD->...ACBD", _E_LO, wf.phi_conj)
    )
    F = np.einsum("aAC,bBD,...ACBD->...ab", objects.s, objects.s, Fs)
    if np.max(np.abs(F.imag)) < 1e-13 * max(1.0, np.max(np.abs(F.real))):
        F = F.real
    F = 0.5 * (F - np.swapaxes(F, -1, -2))
    return BivectorField(F)


def stress_energy(wf: PhotonWaveFunction,
                  objects: ConnectingObjects = _FLAT) -> StressEnergy:
    """T_{AA'BB'} = (1/2 pi) phi_{AB} conj_{A'B'}, converted to world indices."""
    Ts = np.einsum("...AB,...CD->...ACBD", wf.phi, wf.phi_conj) / (2.0 * np.pi)
    T = np.einsum("aAC,bBD,...ACBD->...ab", objects.s, objects.s, Ts)
    return StressEnergy(T.real if np.max(np.abs(T.imag)) < 1e-12 * max(1.0, np.max(np.abs(T.real)) or 1.0) else T)


def dual(field: BivectorField, objects: ConnectingObjects = _FLAT) -> BivectorField:
    """(*F)_ab = (1/2) eps_{abcd} F^{cd}, oriented with eps_{0123} = -1.

    This orientation makes the unprimed wave-function sector anti-self-dual
    with eigenvalue -i, so duality rotations act on it as the phase factor
    exp(-i theta).
    """
    eps4 = -levi_civita4()
    g_inv = objects.metric_inv
    F_up = np.einsum("ac,bd,...cd->...ab", g_inv, g_inv, field.values)
    return BivectorField(0.5 * np.einsum("abcd,...cd->...ab", eps4, F_up))


def invariants(field: BivectorField,
               objects: ConnectingObjects = _FLAT) -> tuple[np.ndarray, np.ndarray]:
    """The quadratic invariants (F_ab F^ab, F_ab (*F)^ab); both vanish iff
    the wave function is null."""
    g_inv = objects.metric_inv
    F = field.values
    F_up = np.einsum("ac,bd,...cd->...ab", g_inv, g_inv, F)
    i1 = np.einsum("...ab,...ab->...", F, F_up)
    dual_up = np.einsum("ac,bd,...cd->...ab", g_inv, g_inv, dual(field, objects).values)
    i2 = np.einsum("...ab,...ab->...", F, dual_up)
    return i1, i2
