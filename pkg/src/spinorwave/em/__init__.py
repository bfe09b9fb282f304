"""Electromagnetic sector: bivector/wave-function conversions, residuals, I/O."""

from .analytic import (
    AnalyticPotential,
    AnalyticWaveFunction,
    constant_potential,
    field_from_potential,
    field_from_potential_grid,
    interior,
    massless_residual,
    massless_residual_grid,
    null_wavevector,
    plane_wave_potential,
    plane_wave_wavefunction,
    pure_gauge_potential,
)
from .csvio import (
    BIVECTOR_HEADER,
    WAVEFUNCTION_HEADER,
    read_bivector_csv,
    read_wavefunction_csv,
    write_bivector_csv,
    write_wavefunction_csv,
)
from .fields import (
    BivectorField,
    PhotonWaveFunction,
    PotentialField,
    StressEnergy,
    bivector_from_spinors,
    dual,
    invariants,
    spinors_from_bivector,
    stress_energy,
)

__all__ = [
    "AnalyticPotential",
    "AnalyticWaveFunction",
    "BIVECTOR_HEADER",
    "BivectorField",
    "PhotonWaveFunction",
    "PotentialField",
    "StressEnergy",
    "WAVEFUNCTION_HEADER",
    "bivector_from_spinors",
    "constant_potential",
    "dual",
    "field_from_potential",
    "field_from_potential_grid",
    "interior",
    "invariants",
    "massless_residual",
    "massless_residual_grid",
    "null_wavevector",
    "plane_wave_potential",
    "plane_wave_wavefunction",
    "pure_gauge_potential",
    "read_bivector_csv",
    "read_wavefunction_csv",
    "spinors_from_bivector",
    "stress_energy",
    "write_bivector_csv",
    "write_wavefunction_csv",
]
