"""Connecting objects between world and spinor indices, signature (+---).

The flat family is ``S_a^{AA'} = (id, sigma_x, sigma_y, sigma_z)/sqrt(2)``,
which reconstructs ``g_ab = diag(+1,-1,-1,-1)`` through the epsilon pair.
A conformally flat family scales ``S`` by ``a(eta)`` (so ``g = a^2 eta_ab``)
and the inverse objects by ``1/a``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateMetricError
from .convention import CONVENTION
from .indices import IndexKind, IndexSignature, Slot, Variance
from .spinor import ComponentSpinor

_PAULI = [
    np.array([[1.0, 0.0], [0.0, 1.0]], dtype=complex),
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
]

MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])


def _reconstruct_metric(s: np.ndarray) -> np.ndarray:
    """g_ab = eps_AB eps_A'B' S_a^{AA'} S_b^{BB'}."""
    e = CONVENTION.eps_low
    return np.einsum("AB,CD,aAC,bBD->ab", e, e, s, s)


@dataclass(frozen=True)
class ConnectingObjects:
    """World-index family of 2x2 matrices ``S_a^{AA'}`` plus inverses."""

    s: np.ndarray        # (4, 2, 2): S_a^{AA'}
    s_inv: np.ndarray    # (4, 2, 2): S^a_{AA'}
    metric: np.ndarray   # (4, 4): g_ab reconstructed from S
    metric_inv: np.ndarray

    def __post_init__(self):
        for name in ("s", "s_inv", "metric", "metric_inv"):
            getattr(self, name).setflags(write=False)

    @classmethod
    def from_matrices(cls, s: np.ndarray) -> "ConnectingObjects":
        s = np.asarray(s, dtype=complex)
        g = _reconstruct_metric(s).real
        if abs(np.linalg.det(g)) < 1e-20:
            raise DegenerateMetricError("connecting objects give a singular metric")
        g_inv = np.linalg.inv(g)
        # S^a_{AA'} = g^{ab} S_b^{XX'} eps_XA eps_X'A'
        e = CONVENTION.eps_low
        s_low = np.einsum("bXY,XA,YB->bAB", s, e, e)
        s_inv = np.einsum("ab,bAB->aAB", g_inv, s_low)
        return cls(s, s_inv, g, g_inv)

    @classmethod
    def flat(cls) -> "ConnectingObjects":
        s = np.stack(_PAULI) / np.sqrt(2.0)
        return cls.from_matrices(s)

    @classmethod
    def conformal(cls, scale: float) -> "ConnectingObjects":
        if scale <= 0.0:
            raise DegenerateMetricError("conformal factor must be positive")
        s = np.stack(_PAULI) / np.sqrt(2.0) * scale
        return cls.from_matrices(s)

    @property
    def conformal_factor_squared(self) -> float:
        return float(self.metric[0, 0])

    # -- conversions ----------------------------------------------------------

    def vector_to_spinor(self, v: np.ndarray, variance: Variance = Variance.UP) -> np.ndarray:
        """v^a -> v^{AA'} = S_a^{AA'} v^a, or v_a -> v_{AA'} = S^a_{AA'} v_a."""
        if variance is Variance.UP:
            return np.einsum("aAB,a->AB", self.s, v)
        return np.einsum("aAB,a->AB", self.s_inv, v)

    def spinor_to_vector(self, m: np.ndarray, variance: Variance = Variance.UP) -> np.ndarray:
        """Inverse of :meth:`vector_to_spinor` for the same variance."""
        if variance is Variance.UP:
            return np.einsum("aAB,AB->a", self.s_inv, m)
        return np.einsum("aAB,AB->a", self.s, m)

    def world_slot_to_spinor_pair(self, cs: ComponentSpinor, position: int) -> ComponentSpinor:
        """Replace one world slot by an (unprimed, primed) pair of the same variance."""
        slot = cs.signature.slots[position]
        if slot.kind is not IndexKind.WORLD:
            raise DegenerateMetricError(f"slot {position} is not a world slot")
        conv = self.s if slot.variance is Variance.UP else self.s_inv
        data = np.tensordot(cs.data, conv, axes=([position], [0]))
        data = np.moveaxis(data, (-2, -1), (position, position + 1))
        slots = list(cs.signature.slots)
        slots[position : position + 1] = [
            Slot(IndexKind.UNPRIMED, slot.variance),
            Slot(IndexKind.PRIMED, slot.variance),
        ]
        return ComponentSpinor(IndexSignature(tuple(slots)), data)

    def spinor_pair_to_world_slot(self, cs: ComponentSpinor, position: int) -> ComponentSpinor:
        """Replace an adjacent (unprimed, primed) pair by one world slot."""
        a, b = cs.signature.slots[position], cs.signature.slots[position + 1]
        if (a.kind, b.kind) != (IndexKind.UNPRIMED, IndexKind.PRIMED) or a.variance is not b.variance:
            raise DegenerateMetricError(
                f"slots {position},{position + 1} are not a same-variance spinor pair"
            )
        conv = self.s_inv if a.variance is Variance.UP else self.s
        data = np.tensordot(cs.data, conv, axes=([position, position + 1], [1, 2]))
        data = np.moveaxis(data, -1, position)
        slots = list(cs.signature.slots)
        slots[position : position + 2] = [Slot(IndexKind.WORLD, a.variance)]
        return ComponentSpinor(IndexSignature(tuple(slots)), data)


def levi_civita4() -> np.ndarray:
    """Totally antisymmetric world tensor with eps_{0123} = +1."""
    eps = np.zeros((4, 4, 4, 4))
    for perm, sign in _perms4():
        eps[perm] = sign
    return eps


def _perms4():
    import itertools

    base = (0, 1, 2, 3)
    for perm in itertools.permutations(base):
        sign = 1.0
        seen = [False] * 4
        for start in range(4):
            if seen[start]:
                continue
            j, length = start, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        yield perm, sign
