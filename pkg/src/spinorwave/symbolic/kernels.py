"""Kernel table for the abstract-index expression engine.

Every kernel has a fixed template of slots; writing an index against the
template variance is sugar for contraction with an explicit metric-spinor
factor, so weights, symmetries and component evaluation always see kernels
in template position.  Derivative operators are the exception: their index
displacement is free (no inserted factor) and carries the declared
per-slot weight contributions instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..errors import ParseError
from .expr import IndexKind, Variance


class Displacement(Enum):
    EPSILON = "epsilon"   # displaced indices insert eps factors
    FREE = "free"         # operator indices displace freely
    FIXED = "fixed"       # written variance must match the template


@dataclass(frozen=True)
class KernelSlot:
    kind: IndexKind
    variance: Variance


@dataclass(frozen=True)
class Kernel:
    name: str
    slots: tuple[KernelSlot, ...]
    weight: tuple[int, int] = (0, 0)
    sym_groups: tuple[tuple[int, ...], ...] = ()       # totally symmetric sets
    antisym_groups: tuple[tuple[int, ...], ...] = ()   # antisymmetric pairs
    operator: bool = False
    displacement: Displacement = Displacement.EPSILON
    constant: bool = False   # numeric components, transparent to operators

    @property
    def rank(self) -> int:
        return len(self.slots)


def _slot(kind: IndexKind, up: bool) -> KernelSlot:
    return KernelSlot(kind, Variance.UP if up else Variance.DOWN)


_U = _slot(IndexKind.UNPRIMED, False)
_UU = _slot(IndexKind.UNPRIMED, True)
_P = _slot(IndexKind.PRIMED, False)
_PU = _slot(IndexKind.PRIMED, True)
_W = _slot(IndexKind.WORLD, False)


def _builtin_kernels() -> dict[str, Kernel]:
    ks = [
        # metric spinors: concrete, fixed variance, carriers of the weights
        Kernel("eps_lo", (_U, _U), (-1, 0), antisym_groups=((0, 1),),
               displacement=Displacement.FIXED, constant=True),
        Kernel("eps_up", (_UU, _UU), (1, 0), antisym_groups=((0, 1),),
               displacement=Displacement.FIXED, constant=True),
        Kernel("eps_lo_p", (_P, _P), (0, -1), antisym_groups=((0, 1),),
               displacement=Displacement.FIXED, constant=True),
        Kernel("eps_up_p", (_PU, _PU), (0, 1), antisym_groups=((0, 1),),
               displacement=Displacement.FIXED, constant=True),
        Kernel("delta", (_UU, _U), (0, 0), displacement=Displacement.FIXED, constant=True),
        Kernel("delta_p", (_PU, _P), (0, 0), displacement=Displacement.FIXED, constant=True),
        # wave functions and curvature objects
        Kernel("phi", (_U, _U), (-1, 0), sym_groups=((0, 1),)),
        Kernel("phi_p", (_P, _P), (0, -1), sym_groups=((0, 1),)),
        Kernel("theta", (_U, _U), (0, 0)),
        Kernel("omega", (_U, _U, _U, _U), (-2, 0)),
        Kernel("Psi", (_U, _U, _U, _U), (-2, 0), sym_groups=((0, 1, 2, 3),)),
        Kernel("W", (_U, _P, _U, _P, _U, _U), (-2, -1)),
        Kernel("Phi", (_W,), (0, 0)),
        Kernel("R", (), (0, 0)),
        Kernel("vartheta_sym", (_W, _U, _U), (-1, 0), sym_groups=((1, 2),)),
        # derivative operators
        Kernel("nabla", (_U, _P), (0, 0), operator=True, displacement=Displacement.FREE),
        Kernel("partial", (_U, _P), (0, 0), operator=True, displacement=Displacement.FREE),
        Kernel("Box", (), (0, 0), operator=True),
        Kernel("Delta", (_UU, _UU), (1, 0), sym_groups=((0, 1),), operator=True),
    ]
    return {k.name: k for k in ks}


# Per-slot weight contributions of freely displaced operator indices, chosen
# so that Box is weight (0,0), Delta matches its declared (+1,0), and the
# splitting relation is weight-homogeneous: an up unprimed index adds +1 to
# the weight, an up primed index adds -1 to the weight, down indices nothing.
def operator_displacement_weight(kind: IndexKind, variance: Variance) -> tuple[int, int]:
    if variance is Variance.DOWN:
        return (0, 0)
    if kind is IndexKind.UNPRIMED:
        return (1, 0)
    if kind is IndexKind.PRIMED:
        return (-1, 0)
    return (0, 0)


ALIASES = {"M": "eps", "d": "partial"}


@dataclass
class KernelTable:
    """Builtin kernels plus expression-scoped auto-registered generics."""

    kernels: dict[str, Kernel] = field(default_factory=_builtin_kernels)

    def get(self, name: str) -> Kernel | None:
        return self.kernels.get(name)

    def resolve_eps(self, kind: IndexKind, variance: Variance) -> Kernel:
        if kind is IndexKind.WORLD:
            raise ParseError("metric spinor takes spinor indices only")
        primed = kind is IndexKind.PRIMED
        up = variance is Variance.UP
        name = f"eps_{'up' if up else 'lo'}{'_p' if primed else ''}"
        return self.kernels[name]

    def auto_register(self, name: str, slots: tuple[KernelSlot, ...]) -> Kernel:
        """Unknown kernels become generic: template = first written position."""
        kernel = Kernel(name, slots)
        self.kernels[name] = kernel
        return kernel

    def copy(self) -> "KernelTable":
        return KernelTable(dict(self.kernels))
