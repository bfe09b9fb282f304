"""Concrete two-component spinor algebra and connecting objects."""

from .affinity import (
    SpinAffinity,
    affinity_from_metric,
    covariant_derivative_forms,
    metric_compatibility_residual,
)
from .connecting import ConnectingObjects, levi_civita4, MINKOWSKI
from .convention import CONVENTION, EPS_LOW, EPS_UP, MetricSpinorConvention
from .indices import IndexKind, IndexSignature, Slot, Variance, spinor_signature
from .spinor import ComponentSpinor, random_spinor

__all__ = [
    "CONVENTION",
    "ComponentSpinor",
    "ConnectingObjects",
    "EPS_LOW",
    "EPS_UP",
    "IndexKind",
    "IndexSignature",
    "MINKOWSKI",
    "MetricSpinorConvention",
    "Slot",
    "SpinAffinity",
    "Variance",
    "affinity_from_metric",
    "covariant_derivative_forms",
    "levi_civita4",
    "metric_compatibility_residual",
    "random_spinor",
    "spinor_signature",
]
