import math

import numpy as np
import pytest

from compass_cqed.decoherence import DecayParams, decohere_compass
from compass_cqed.errors import CutoffTooSmall, StepTooLarge
from compass_cqed.numerics import (
    annihilation,
    default_rk4_step,
    displacement_matrix,
    jc_propagate,
    lindblad_rk4,
    trace_distance,
)
from compass_cqed.protocol import AtomState, conditional_project, dispersive_pass, ramsey_atom, single_atom_fock_rows
from compass_cqed.selfcheck import dispersive_infidelity
from compass_cqed.states import DensityMatrixFock, FockVector, coherent, coherent_fock_amplitudes, to_fock


def coherent_rho(alpha, cutoff):
    v = coherent_fock_amplitudes(alpha, cutoff)
    return DensityMatrixFock(np.outer(v, v.conj()))


class TestDisplacement:
    def test_identity(self):
        assert np.allclose(displacement_matrix(0.0, 12), np.eye(13))

    def test_first_column_is_coherent(self):
        g = 1.2 - 0.7j
        assert np.allclose(displacement_matrix(g, 40)[:, 0], coherent_fock_amplitudes(g, 40), atol=1e-14)

    def test_inverse(self):
        g, n = 0.9 + 0.4j, 60
        big = displacement_matrix(g, n) @ displacement_matrix(-g, n)
        assert np.max(np.abs(big[:30, :30] - np.eye(30))) < 1e-8

    def test_unitary_on_retained_block(self):
        n = 81
        g = math.sqrt(n) / 3
        d = displacement_matrix(g, n)
        # columns whose displaced image stays well inside the truncation
        k = n // 4
        block = d.conj().T @ d
        assert np.max(np.abs(block[:k, :k] - np.eye(k))) < 1e-8

    def test_against_matrix_exponential(self):
        from scipy.linalg import expm

        n, g = 70, 0.8 - 0.5j
        a = annihilation(n)
        ref = expm(g * a.conj().T - np.conj(g) * a)
        assert np.max(np.abs(displacement_matrix(g, n)[:30, :30] - ref[:30, :30])) < 1e-10

    def test_rectangular(self):
        assert displacement_matrix(0.5, 10, 20).shape == (21, 11)


class TestJaynesCummings:
    def test_no_coupling_is_free_rotation(self):
        fv = to_fock(coherent(1.2))
        psi = jc_propagate(fv, AtomState.ground(), 0.0, 0.7, 1.3)
        n = np.arange(fv.cutoff + 1)
        assert np.allclose(psi[1], fv.amplitudes * np.exp(-1j * n * 0.7 * 1.3), atol=1e-14)
        assert np.allclose(psi[0], 0)

    def test_single_photon_rabi(self):
        for t in (0.0, 0.4, 1.1, 2.5):
            psi = jc_propagate(FockVector.number_state(1, 5), AtomState.ground(), 1.0, 0.0, t)
            assert psi[1, 1] == pytest.approx(math.cos(t), abs=1e-14)
            assert psi[0, 0] == pytest.approx(-1j * math.sin(t), abs=1e-14)

    def test_manifolds_are_conserved(self):
        fv = FockVector.number_state(3, 8)
        psi = jc_propagate(fv, AtomState.ground(), 1.0, 0.3, 2.0)
        mask_g = np.ones(9, bool)
        mask_g[3] = False
        mask_e = np.ones(9, bool)
        mask_e[2] = False
        assert np.all(psi[1, mask_g] == 0) and np.all(psi[0, mask_e] == 0)

    def test_norm(self):
        fv = to_fock(coherent(2.0 + 1j))
        psi = jc_propagate(fv, ramsey_atom(0.3, 1.0), 1.0, 0.5, 7.0)
        assert np.sum(np.abs(psi) ** 2) == pytest.approx(1.0, abs=1e-12)

    def test_cutoff_check(self):
        fv = FockVector(coherent_fock_amplitudes(4.0, 12) / np.linalg.norm(coherent_fock_amplitudes(4.0, 12)))
        with pytest.raises(CutoffTooSmall):
            jc_propagate(fv, AtomState.ground(), 1.0, 0.0, 1.0)

    def test_dispersive_limit_branch_fidelity(self):
        # delta/g = 20, phi = pi/8: exact JC output agrees with the dispersive map to O((g/delta)^2)
        inf = dispersive_infidelity(20.0)
        assert 0 < inf < 20 * (1 / 20) ** 2

    def test_dispersive_scaling(self):
        inf = [dispersive_infidelity(r) for r in (10.0, 20.0, 40.0)]
        for a, b in zip(inf, inf[1:]):
            assert 2 <= a / b <= 8

    def test_effective_map_rows(self):
        s = dispersive_pass(coherent(1.0), AtomState.excited(), 0.2)
        rows = single_atom_fock_rows(s, 30)
        assert np.allclose(rows[1], 0)
        _, p = conditional_project(s, [AtomState.excited()])
        assert np.sum(np.abs(rows[0]) ** 2) == pytest.approx(p, abs=1e-12)


class TestLindblad:
    def test_vacuum_is_dark(self):
        rho = coherent_rho(0.0, 10)
        assert trace_distance(lindblad_rk4(rho, 1.0, 2.0), rho) < 1e-14

    def test_coherent_stays_coherent(self):
        a, kt = 1.5 + 0.5j, 0.8
        out = lindblad_rk4(coherent_rho(a, 40), 1.0, kt)
        assert trace_distance(out, coherent_rho(a * math.exp(-kt / 2), 40)) < 1e-6

    def test_compass_matches_analytic(self):
        rho0 = decohere_compass(2.0, DecayParams(kappa=1.0))
        out = lindblad_rk4(rho0, 1.0, 0.1)
        assert trace_distance(out, decohere_compass(2.0, DecayParams(kappa=1.0, t=0.1))) < 1e-6
        assert out.trace() == pytest.approx(1.0, abs=1e-8)

    def test_fourth_order(self):
        rho0 = decohere_compass(1.0, DecayParams(kappa=1.0), cutoff=20)
        exact = decohere_compass(1.0, DecayParams(kappa=1.0, t=0.5), cutoff=20)
        e1 = trace_distance(lindblad_rk4(rho0, 1.0, 0.5, dt=0.1), exact)
        e2 = trace_distance(lindblad_rk4(rho0, 1.0, 0.5, dt=0.05), exact)
        assert 8 <= e1 / e2 <= 32  # 16 within a factor of 2

    def test_step_rule(self):
        assert default_rk4_step(1.0, 0.5) == pytest.approx(5e-4)
        assert default_rk4_step(2.0, 10.0) == pytest.approx(5e-4)

    def test_oversized_step(self):
        with pytest.raises(StepTooLarge):
            lindblad_rk4(coherent_rho(3.0, 60), 1.0, 2.0, dt=1.0)

    def test_zero_time(self):
        rho = coherent_rho(1.0, 20)
        assert trace_distance(lindblad_rk4(rho, 1.0, 0.0), rho) == 0.0


def test_trace_distance_extremes():
    a = coherent_rho(0.0, 5)
    b = DensityMatrixFock(np.diag([0, 1, 0, 0, 0, 0]).astype(complex))
    assert trace_distance(a, a) == 0.0
    assert trace_distance(a, b) == pytest.approx(1.0)
