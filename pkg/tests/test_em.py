"""Electromagnetic sector: conversions, residuals, invariants, stress tensor,
and the CSV interchange formats."""

import math

import numpy as np
import pytest

from spinorwave.core.connecting import MINKOWSKI
from spinorwave.em import (
    BivectorField,
    PhotonWaveFunction,
    bivector_from_spinors,
    constant_potential,
    dual,
    field_from_potential,
    field_from_potential_grid,
    interior,
    invariants,
    massless_residual,
    massless_residual_grid,
    null_wavevector,
    plane_wave_potential,
    plane_wave_wavefunction,
    pure_gauge_potential,
    read_bivector_csv,
    read_wavefunction_csv,
    spinors_from_bivector,
    stress_energy,
    write_bivector_csv,
    write_wavefunction_csv,
)
from spinorwave.errors import BivectorError, SpinorSymmetryError

RNG = np.random.default_rng(7)


def random_bivectors(n):
    raw = RNG.standard_normal((n, 4, 4))
    return BivectorField(raw - np.swapaxes(raw, -1, -2))


def random_wavefunction(n=1):
    raw = RNG.standard_normal((n, 2, 2)) + 1j * RNG.standard_normal((n, 2, 2))
    return PhotonWaveFunction.physical(0.5 * (raw + np.swapaxes(raw, -1, -2)))


class TestConversions:
    def test_zero_maps_to_zero(self):
        wf = spinors_from_bivector(BivectorField(np.zeros((4, 4))))
        assert np.max(np.abs(wf.phi)) == 0.0

    def test_roundtrip_100_draws(self):
        F = random_bivectors(100)
        back = bivector_from_spinors(spinors_from_bivector(F))
        assert np.max(np.abs(back.values - F.values)) < 1e-12

    def test_real_field_gives_conjugate_sector(self):
        wf = spinors_from_bivector(random_bivectors(50))
        assert np.max(np.abs(wf.phi_conj - np.conj(wf.phi))) < 1e-14

    def test_linearity(self):
        wf1, wf2 = random_wavefunction(8), random_wavefunction(8)
        summed = PhotonWaveFunction(wf1.phi + wf2.phi, wf1.phi_conj + wf2.phi_conj)
        lhs = bivector_from_spinors(summed).values
        rhs = bivector_from_spinors(wf1).values + bivector_from_spinors(wf2).values
        assert np.max(np.abs(lhs - rhs)) < 1e-13

    def test_single_component_gives_real_rank2(self):
        phi = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
        F = bivector_from_spinors(PhotonWaveFunction.physical(phi)).values
        assert np.max(np.abs(np.imag(F))) < 1e-14
        assert np.linalg.matrix_rank(F) == 2

    def test_antisymmetry_enforced(self):
        with pytest.raises(BivectorError):
            BivectorField(np.eye(4))

    def test_symmetry_enforced(self):
        with pytest.raises(SpinorSymmetryError):
            PhotonWaveFunction.physical(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_duality_rotation_phase(self):
        F = random_bivectors(10)
        wf = spinors_from_bivector(F)
        theta = 0.37
        rotated = BivectorField(
            math.cos(theta) * F.values + math.sin(theta) * dual(F).values
        )
        wf_rot = spinors_from_bivector(rotated)
        assert np.max(np.abs(wf_rot.phi - np.exp(-1j * theta) * wf.phi)) < 1e-12


class TestPotentials:
    def test_pure_gauge_has_no_field(self):
        pot = pure_gauge_potential(np.array([0.7, 0.2, -0.4, 0.9]), scale=2.0)
        pts = RNG.standard_normal((30, 4))
        assert np.max(np.abs(field_from_potential(pot, pts).values)) < 1e-12

    def test_constant_potential_has_no_field(self):
        pot = constant_potential(np.array([1.0, 2.0, 3.0, 4.0]))
        pts = RNG.standard_normal((10, 4))
        assert np.max(np.abs(field_from_potential(pot, pts).values)) == 0.0

    def test_null_wave_matches_hand_differentiation(self):
        # Phi = (0, sin(t - x), 0, 0): F_01 = -cos(t-x) hand-derived from
        # F_ab = d_a Phi_b - d_b Phi_a with k = (1, -1, 0, 0) covector
        k = np.array([1.0, -1.0, 0.0, 0.0])
        p = np.array([0.0, 1.0, 0.0, 0.0])
        pot = plane_wave_potential(p, k)
        pts = RNG.standard_normal((20, 4))
        F = field_from_potential(pot, pts).values
        phase = pts @ k
        assert np.max(np.abs(F[:, 0, 1] - np.cos(phase))) < 1e-12
        assert np.max(np.abs(F[:, 1, 0] + np.cos(phase))) < 1e-12
        assert np.max(np.abs(F[:, 2, :])) < 1e-14

    def test_grid_gauge_invariance_second_order(self):
        # adding an exact gradient changes the grid field only by the
        # stencil error, which shrinks at second order
        k = np.array([0.9, 0.4, 0.0, 0.0])
        gauge = pure_gauge_potential(k, scale=1.5)

        def gauge_field(n):
            axes = [np.linspace(0.0, 1.0, n)] * 2 + [np.array([0.0])] * 2
            mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
            h = 1.0 / (n - 1)
            F = field_from_potential_grid(gauge.value(mesh), h).values
            return np.max(np.abs(F[interior(F.shape[:4])]))

        e1, e2 = gauge_field(33), gauge_field(65)
        assert math.log2(e1 / e2) == pytest.approx(2.0, abs=0.3)

    def test_grid_derivative_second_order(self):
        k = np.array([1.0, -1.0, 0.0, 0.0])
        pot = plane_wave_potential(np.array([0.0, 1.0, 0.0, 0.0]), k)

        def grid_error(n):
            axes = [np.linspace(0.0, 1.0, n)] * 2 + [np.array([0.0])] * 2
            mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
            values = pot.value(mesh)
            h = 1.0 / (n - 1)
            F_grid = field_from_potential_grid(values, h).values
            F_exact = field_from_potential(pot, mesh).values
            core = interior(values.shape[:4])
            return np.max(np.abs((F_grid - F_exact)[core]))

        e1, e2 = grid_error(33), grid_error(65)
        assert math.log2(e1 / e2) == pytest.approx(2.0, abs=0.3)


class TestGridErrors:
    def test_potential_grid_too_small(self):
        from spinorwave.errors import GridError

        with pytest.raises(GridError):
            field_from_potential_grid(np.zeros((2, 5, 5, 5, 4)), 0.1)

    def test_wavefunction_grid_shape_enforced(self):
        from spinorwave.errors import GridError

        with pytest.raises(GridError):
            massless_residual_grid(np.zeros((5, 5, 2, 2)), 0.1)


class TestMasslessResidual:
    def test_null_plane_wave_satisfies_field_equation(self):
        alpha = np.array([1.0 + 0.2j, 0.4 - 0.9j])
        k = null_wavevector(alpha)
        assert abs(k @ MINKOWSKI @ k) < 1e-12
        wf = plane_wave_wavefunction(alpha, k)
        pts = RNG.standard_normal((40, 4))
        assert massless_residual(wf, pts) < 1e-12

    def test_constant_wavefunction_has_zero_residual(self):
        wf = plane_wave_wavefunction(np.array([1.0, 2.0]), np.zeros(4))
        assert massless_residual(wf, RNG.standard_normal((10, 4))) < 1e-14

    def test_non_null_wave_rejected(self):
        alpha = np.array([1.0 + 0.2j, 0.4 - 0.9j])
        k = null_wavevector(alpha) + np.array([0.6, 0.0, 0.0, 0.0])
        wf = plane_wave_wavefunction(alpha, k)
        pts = RNG.standard_normal((40, 4))
        bound = 0.1 * float(np.linalg.norm(k)) * float(np.max(np.abs(wf.phi(pts))))
        assert massless_residual(wf, pts) > bound

    def test_grid_residual_second_order(self):
        alpha = np.array([1.0 + 0.2j, 0.4 - 0.9j])
        k = null_wavevector(alpha)
        wf = plane_wave_wavefunction(alpha, k)

        def residual(n):
            axes = [np.linspace(0.0, 1.0, n)] * 4
            mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
            return massless_residual_grid(wf.phi(mesh), 1.0 / (n - 1))

        r1, r2 = residual(9), residual(17)
        assert math.log2(r1 / r2) == pytest.approx(2.0, abs=0.3)


class TestStressEnergy:
    def test_trace_free_and_positive(self):
        g_inv = np.linalg.inv(MINKOWSKI)
        t = np.array([1.0, 0.0, 0.0, 0.0])
        for _ in range(100):
            wf = random_wavefunction(1)
            T = stress_energy(wf).values[0]
            assert np.max(np.abs(T - T.T)) < 1e-12
            assert abs(np.einsum("ab,ab->", g_inv, T)) < 1e-12
            assert t @ T @ t >= -1e-12

    def test_zero_wavefunction(self):
        wf = PhotonWaveFunction.physical(np.zeros((2, 2)))
        assert np.max(np.abs(stress_energy(wf).values)) == 0.0

    def test_matches_nested_loop_oracle_with_prefactor(self):
        from spinorwave.core.connecting import ConnectingObjects

        co = ConnectingObjects.flat()
        wf = random_wavefunction(1)
        T = stress_energy(wf).values[0]
        want = np.zeros((4, 4), dtype=complex)
        for a in range(4):
            for b in range(4):
                acc = 0j
                for A in range(2):
                    for Ap in range(2):
                        for B in range(2):
                            for Bp in range(2):
                                acc += (
                                    co.s[a, A, Ap]
                                    * co.s[b, B, Bp]
                                    * wf.phi[0, A, B]
                                    * wf.phi_conj[0, Ap, Bp]
                                )
                want[a, b] = acc / (2.0 * math.pi)
        assert np.max(np.abs(T - want)) < 1e-12


class TestInvariants:
    def test_null_wave_invariants_vanish(self):
        alpha = np.array([1.0 + 0.2j, 0.4 - 0.9j])
        wf_a = plane_wave_wavefunction(alpha, null_wavevector(alpha))
        pts = RNG.standard_normal((20, 4))
        phi = wf_a.phi(pts)
        field = bivector_from_spinors(
            PhotonWaveFunction(0.5 * (phi + np.swapaxes(phi, -1, -2)),
                               np.conj(0.5 * (phi + np.swapaxes(phi, -1, -2))))
        )
        i1, i2 = invariants(field)
        assert np.max(np.abs(i1)) < 1e-12
        assert np.max(np.abs(i2)) < 1e-12

    def test_pure_electric_component(self):
        F = np.zeros((4, 4))
        F[0, 1], F[1, 0] = 1.0, -1.0
        i1, i2 = invariants(BivectorField(F))
        assert i1 == pytest.approx(-2.0)
        assert i2 == pytest.approx(0.0)

    def test_zero_field(self):
        i1, i2 = invariants(BivectorField(np.zeros((4, 4))))
        assert i1 == 0.0 and i2 == 0.0


class TestCsv:
    def test_wavefunction_roundtrip_bytes(self):
        pts = RNG.standard_normal((12, 4))
        wf = random_wavefunction(12)
        text = write_wavefunction_csv(pts, wf)
        pts2, wf2 = read_wavefunction_csv(text)
        assert write_wavefunction_csv(pts2, wf2) == text

    def test_bivector_roundtrip_bytes(self):
        pts = RNG.standard_normal((9, 4))
        F = random_bivectors(9)
        text = write_bivector_csv(pts, F)
        pts2, F2 = read_bivector_csv(text)
        assert write_bivector_csv(pts2, F2) == text
        assert np.max(np.abs(F2.values - F.values)) < 1e-15

    def test_headers_are_pinned(self):
        from spinorwave.em import BIVECTOR_HEADER, WAVEFUNCTION_HEADER

        assert WAVEFUNCTION_HEADER == (
            "t,x,y,z,re_phi00,im_phi00,re_phi01,im_phi01,re_phi11,im_phi11"
        )
        assert BIVECTOR_HEADER == "t,x,y,z,F01,F02,F03,F12,F13,F23"
