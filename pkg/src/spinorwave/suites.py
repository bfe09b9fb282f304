"""Seeded property suites behind the ``check`` subcommand.

Every suite draws its random inputs from a generator seeded by the run seed,
reports its worst error against the documented tolerance, and never raises:
an exception is itself a failure (negative-control hooks corrupt the algebra
on purpose).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import affinity as aff
from .core.connecting import ConnectingObjects, _PAULI, MINKOWSKI
from .core.convention import default_convention
from .core.indices import spinor_signature
from .core.spinor import ComponentSpinor, random_spinor
from .em import (
    BivectorField,
    PhotonWaveFunction,
    bivector_from_spinors,
    dual,
    massless_residual,
    null_wavevector,
    plane_wave_potential,
    plane_wave_wavefunction,
    pure_gauge_potential,
    field_from_potential,
    spinors_from_bivector,
    stress_energy,
)
from .symbolic import KernelTable, Parser, component_eval


@dataclass
class SuiteResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_error": self.max_error,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


def _result(name: str, max_error: float, tol: float, detail: str = "") -> SuiteResult:
    return SuiteResult(name, bool(max_error < tol), float(max_error), tol, detail)


def _suite_eps_algebra(rng: np.random.Generator) -> SuiteResult:
    conv = default_convention()
    worst = 0.0
    delta = np.einsum("ab,cb->ac", conv.eps_up, conv.eps_low)
    worst = max(worst, float(np.max(np.abs(delta - np.eye(2)))))
    worst = max(worst, abs(np.einsum("ab,ab->", conv.eps_up, conv.eps_low) - 2.0))
    for _ in range(50):
        xi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        worst = max(worst, float(np.max(np.abs(conv.lower_vector(conv.raise_vector(xi)) - xi))))
    s = random_spinor(spinor_signature("uuu"), rng)
    worst = max(worst, s.symmetrize((0, 1, 2), antisym=True).max_abs())
    return _result("eps-algebra", worst, 1e-14)


def _suite_decomposition(rng: np.random.Generator) -> SuiteResult:
    conv = default_convention()
    worst = 0.0
    for _ in range(100):
        theta = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        sym = 0.5 * (theta + theta.T)
        trace = np.einsum("CB,CB->", np.asarray(conv.eps_up), theta)
        recon = sym + 0.5 * np.asarray(conv.eps_low) * trace
        worst = max(worst, float(np.max(np.abs(theta - recon))))
    return _result("decomposition", worst, 1e-14)


def _suite_conjugation(rng: np.random.Generator) -> SuiteResult:
    worst = 0.0
    for _ in range(25):
        s = random_spinor(spinor_signature("uUpP"), rng)
        worst = max(worst, (s.conjugate().conjugate() - s).max_abs())
        c1 = s.contract(0, 1).conjugate()
        c2 = s.conjugate().contract(0, 1)
        worst = max(worst, (c1 - c2).max_abs())
    return _result("conjugation", worst, 1e-14)


def _suite_index_displacement(rng: np.random.Generator, draws: int = 1000) -> SuiteResult:
    worst = 0.0
    for _ in range(draws):
        theta = aff.SpinAffinity(rng.standard_normal((4, 2, 2)) + 1j * rng.standard_normal((4, 2, 2)))
        low = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        phi_low = 0.5 * (low + low.T)
        phi = np.einsum("BX,AX->AB", np.asarray(default_convention().eps_up), phi_low)
        dphi = rng.standard_normal((4, 2, 2)) + 1j * rng.standard_normal((4, 2, 2))
        direct, rearranged = aff.covariant_derivative_forms(phi, theta, dphi)
        worst = max(worst, float(np.max(np.abs(direct - rearranged))))
    return _result("index-displacement", worst, 1e-12, f"{draws} draws")


def _conformal_family(a0: float, a1: float, eta: float):
    """S, dg, ds for a(eta) = a0 + a1*eta with exact derivatives."""
    a = a0 + a1 * eta
    base = np.stack(_PAULI) / np.sqrt(2.0)
    s = a * base
    ds = np.zeros((4, 4, 2, 2), dtype=complex)
    ds[0] = a1 * base
    dg = np.zeros((4, 4, 4))
    dg[0] = 2.0 * a * a1 * MINKOWSKI
    return ConnectingObjects.from_matrices(s), dg, ds


def _suite_affinity_metric(rng: np.random.Generator) -> SuiteResult:
    worst = 0.0
    flat = ConnectingObjects.flat()
    zero_sym = aff.affinity_from_metric(flat, np.zeros((4, 4, 4)), np.zeros((4, 4, 2, 2)))
    worst = max(worst, float(np.max(np.abs(zero_sym))))
    objects, dg, ds = _conformal_family(1.0, 0.3, 0.7)
    sym = aff.affinity_from_metric(objects, dg, ds)
    worst = max(worst, float(np.max(np.abs(sym - np.transpose(sym, (0, 2, 1))))))
    affinity = aff.SpinAffinity.from_symmetric_part(sym)
    worst = max(worst, affinity.split_residual())
    worst = max(worst, aff.metric_compatibility_residual(objects, dg, ds, affinity))
    return _result("affinity-metric", worst, 1e-12)


def _suite_connecting(rng: np.random.Generator) -> SuiteResult:
    worst = 0.0
    co = ConnectingObjects.flat()
    worst = max(worst, float(np.max(np.abs(co.metric - MINKOWSKI))))
    for _ in range(50):
        v = rng.standard_normal(4)
        m = co.vector_to_spinor(v)
        worst = max(worst, float(np.max(np.abs(co.spinor_to_vector(m) - v))))
    cc = ConnectingObjects.conformal(2.5)
    worst = max(worst, float(np.max(np.abs(cc.metric - 6.25 * MINKOWSKI))))
    return _result("connecting-objects", worst, 1e-12)


def _suite_bivector_roundtrip(rng: np.random.Generator) -> SuiteResult:
    worst = 0.0
    raw = rng.standard_normal((100, 4, 4))
    F = BivectorField(raw - np.swapaxes(raw, -1, -2))
    wf = spinors_from_bivector(F)
    worst = max(worst, float(np.max(np.abs(wf.phi_conj - np.conj(wf.phi)))))
    back = bivector_from_spinors(wf)
    worst = max(worst, float(np.max(np.abs(back.values - F.values))))
    return _result("bivector-roundtrip", worst, 1e-12, "100 draws")


def _suite_duality(rng: np.random.Generator) -> SuiteResult:
    raw = rng.standard_normal((20, 4, 4))
    F = BivectorField(raw - np.swapaxes(raw, -1, -2))
    wf = spinors_from_bivector(F)
    rotated = BivectorField(
        math.cos(math.pi / 2) * F.values + math.sin(math.pi / 2) * dual(F).values
    )
    wf_rot = spinors_from_bivector(rotated)
    expected = np.exp(-1j * math.pi / 2) * wf.phi
    worst = float(np.max(np.abs(wf_rot.phi - expected)))
    return _result("duality-rotation", worst, 1e-12, "theta = pi/2")


def _suite_massless(rng: np.random.Generator) -> SuiteResult:
    alpha = np.array([0.8 + 0.3j, -0.2 + 0.5j])
    k = null_wavevector(alpha)
    wf = plane_wave_wavefunction(alpha, k)
    pts = rng.standard_normal((60, 4))
    worst = massless_residual(wf, pts)
    # negative control: a non-null wave must be rejected loudly
    k_bad = k + np.array([0.5, 0.0, 0.0, 0.0])
    wf_bad = plane_wave_wavefunction(alpha, k_bad)
    bound = 0.1 * float(np.linalg.norm(k_bad)) * float(np.max(np.abs(wf_bad.phi(pts))))
    if massless_residual(wf_bad, pts) <= bound:
        return SuiteResult("massless-null-wave", False, math.inf, 1e-12,
                           "non-null wave not rejected")
    return _result("massless-null-wave", worst, 1e-12)


def _suite_gauge_invariance(rng: np.random.Generator) -> SuiteResult:
    k = np.array([0.9, 0.4, -0.2, 0.1])
    gauge = pure_gauge_potential(k, scale=1.3)
    pts = rng.standard_normal((40, 4))
    F = field_from_potential(gauge, pts)
    worst = float(np.max(np.abs(F.values)))
    wave = plane_wave_potential(np.array([0.0, 1.0, 0.0, 0.0]), np.array([1.0, 1.0, 0.0, 0.0]))
    F1 = field_from_potential(wave, pts)
    shifted = lambda x: wave.value(x) + gauge.value(x)
    shifted_grad = lambda x: wave.grad(x) + gauge.grad(x)
    from .em import AnalyticPotential

    F2 = field_from_potential(AnalyticPotential(shifted, shifted_grad), pts)
    worst = max(worst, float(np.max(np.abs(F1.values - F2.values))))
    return _result("gauge-invariance", worst, 1e-12)


def _suite_trace_free(rng: np.random.Generator) -> SuiteResult:
    worst = 0.0
    t = np.array([1.0, 0.0, 0.0, 0.0])
    for _ in range(100):
        raw = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        wf = PhotonWaveFunction.physical(0.5 * (raw + raw.T))
        T = stress_energy(wf).values
        worst = max(worst, float(np.max(np.abs(T - T.T))))
        worst = max(worst, abs(float(np.einsum("ab,ab->", np.linalg.inv(MINKOWSKI), T))))
        density = float(t @ T @ t)
        if density < -1e-12:
            return SuiteResult("trace-free", False, abs(density), 1e-12,
                               "negative energy density")
    return _result("trace-free", worst, 1e-12, "100 draws")


def _suite_symbolic_numeric(rng: np.random.Generator) -> SuiteResult:
    table = KernelTable()
    parser = Parser(table)
    worst = 0.0
    lhs, rhs = parser.parse_identity(
        "theta_{A B} == theta_{(A B)} + 1/2 eps_{A B} theta_{C}^{C}"
    )
    diff = lhs - rhs
    for _ in range(100):
        theta = random_spinor(spinor_signature("uu"), rng)
        value = component_eval(diff, {"theta": theta}, table)
        worst = max(worst, value.max_abs())
    # graviton-coupling contraction against a direct nested loop
    expr = parser.parse_expression("2 Psi_{A D}^{B C} phi_{C}^{D}")
    eps_up = np.asarray(default_convention().eps_up)
    for _ in range(25):
        psi = random_spinor(spinor_signature("uuuu"), rng).symmetrize((0, 1, 2, 3))
        low = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        phi = ComponentSpinor(spinor_signature("uu"), 0.5 * (low + low.T))
        got = component_eval(expr, {"Psi": psi, "phi": phi}, table).data
        want = np.zeros((2, 2), dtype=complex)  # free labels A (down), B (up)
        # direct loop with the same displacement reading: Psi_{AD}^{BC} phi_C^D
        for A in range(2):
            for B in range(2):
                acc = 0j
                for C in range(2):
                    for D in range(2):
                        psi_mixed = 0j
                        for x in range(2):
                            for y in range(2):
                                psi_mixed += psi.data[A, D, x, y] * eps_up[B, x] * eps_up[C, y]
                        phi_mixed = 0j
                        for u in range(2):
                            phi_mixed += phi.data[C, u] * eps_up[D, u]
                        acc += 2.0 * psi_mixed * phi_mixed
                want[A, B] = acc
        worst = max(worst, float(np.max(np.abs(got - want))))
    return _result("symbolic-numeric", worst, 1e-10, "nested-loop oracle")


SUITES: dict[str, Callable[[np.random.Generator], SuiteResult]] = {
    "eps-algebra": _suite_eps_algebra,
    "decomposition": _suite_decomposition,
    "conjugation": _suite_conjugation,
    "index-displacement": _suite_index_displacement,
    "affinity-metric": _suite_affinity_metric,
    "connecting-objects": _suite_connecting,
    "bivector-roundtrip": _suite_bivector_roundtrip,
    "duality-rotation": _suite_duality,
    "massless-null-wave": _suite_massless,
    "gauge-invariance": _suite_gauge_invariance,
    "trace-free": _suite_trace_free,
    "symbolic-numeric": _suite_symbolic_numeric,
}


def run_suites(seed: int, names: list[str] | None = None) -> list[SuiteResult]:
    selected = names or sorted(SUITES)
    results = []
    for name in selected:
        rng = np.random.default_rng([seed, _stable_hash(name)])
        try:
            results.append(SUITES[name](rng))
        except Exception as exc:  # a crash is a failed suite, not a crash of the run
            results.append(SuiteResult(name, False, math.inf, 0.0, f"{type(exc).__name__}: {exc}"))
    return results


def _stable_hash(name: str) -> int:
    out = 0
    for ch in name:
        out = (out * 131 + ord(ch)) % (2**31 - 1)
    return out
