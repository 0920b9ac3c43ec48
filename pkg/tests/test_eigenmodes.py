"""Floquet single-cycle eigenmode construction tests."""

import numpy as np
import pytest

from floqcool import eigenmodes as em
from floqcool.gaussian import GaussianState
from floqcool.rdm import vacuum_covariance


CASES = [(4, 0.2, 0.2), (6, 0.2, 0.2), (8, 0.3, 0.15), (12, 0.1, 0.3), (30, 0.2, 0.2)]


@pytest.mark.parametrize("L,g,J", CASES)
def test_mode_table_residuals_and_completeness(L, g, J):
    t = em.solve_modes(L, g, J)
    v = em.validate_table(t)
    assert v["n_modes"] == L
    assert v["max_residual"] < 1e-10
    assert v["orthonormality"] < 1e-10
    assert np.max(np.abs(t.K @ t.K.T - np.eye(2 * L))) < 1e-12


def test_boundary_mode_appears_below_critical_field():
    # J > g: one fermionic edge mode, excluded from the standing-wave count
    t = em.solve_modes(12, 0.1, 0.3)
    v = em.validate_table(t)
    assert v["n_analytic"] == 11
    edge = [m for m in t.modes if not m.analytic]
    assert len(edge) == 1
    # edge quasienergy far below the bulk band
    bulk_min = min(m.phi for m in t.modes if m.analytic)
    assert edge[0].phi < 0.1 * bulk_min
    # amplitude localized at the chain ends
    amp = np.abs(edge[0].psi)
    assert amp[:2].max() > 5 * amp[11:13].max()


def test_all_modes_analytic_above_critical_field():
    t = em.solve_modes(12, 0.3, 0.1)
    assert em.validate_table(t)["n_analytic"] == 12


def test_annihilator_and_amplitude_branches():
    t = em.solve_modes(6, 0.25, 0.2)
    for m in t.modes:
        r1 = np.max(np.abs(t.K @ m.psi - np.exp(1j * m.phi) * m.psi))
        r2 = np.max(np.abs(t.K @ m.amp - np.exp(-1j * m.phi) * m.amp))
        assert r1 < 1e-10 and r2 < 1e-10


def test_bloch_eigenphases_match_dispersion():
    q, g, J = 0.7321, 0.25, 0.2
    phi = em.dispersion(q, g, J)
    ev = np.linalg.eigvals(em.bloch_matrix(q, g, J))
    assert np.max(np.abs(np.sort(np.angle(ev)) - np.array([-phi, phi]))) < 1e-12
    assert phi == pytest.approx(1.3047389528409488, abs=1e-12)


def test_quantization_condition_satisfied_at_solved_momenta():
    t = em.solve_modes(10, 0.25, 0.2)
    for m in t.modes:
        if m.analytic:
            assert em.quantization_mismatch(m.q, t.L, t.g, t.J) < 1e-10


def test_site1_weights_match_closed_form():
    t = em.solve_modes(10, 0.25, 0.2)
    for m in t.modes:
        if m.analytic:
            fp, fm = em.analytic_weights(m)
            assert fp == pytest.approx(m.f_plus, abs=1e-12)
            assert fm == pytest.approx(m.f_minus, abs=1e-12)
            assert fp >= 0.0 and fm >= 0.0


def test_weights_of_edge_mode_raise():
    t = em.solve_modes(12, 0.1, 0.3)
    edge = [m for m in t.modes if not m.analytic][0]
    with pytest.raises(ValueError):
        em.analytic_weights(edge)


def test_vacuum_has_zero_occupations():
    t = em.solve_modes(6, 0.2, 0.2)
    occ = t.occupations(vacuum_covariance(t))
    assert np.max(np.abs(occ)) < 1e-10


def test_polarized_state_occupations_frozen_values():
    """Quasiparticle content of the all-|0> product state (fixed point check)."""
    t = em.solve_modes(6, 0.2, 0.2)
    occ = t.occupations(GaussianState.product_state([0] * 6).gamma)
    ref = [0.13367696, 0.25028356, 0.19909637, 0.12927646, 0.06387748, 0.01709079]
    assert np.max(np.abs(occ - ref)) < 1e-6
    phis_ref = [0.14391009, 0.42560641, 0.68840302, 0.91814915, 1.09924487, 1.21612096]
    assert np.max(np.abs(t.phis - phis_ref)) < 1e-6


def test_occupations_bounded_in_unit_interval(rng):
    t = em.solve_modes(5, 0.3, 0.2)
    s = GaussianState.product_state([0, 1, 0, 1, 1])
    from conftest import apply_ops_to, random_rotation_ops

    apply_ops_to(s, random_rotation_ops(5, 30, rng))
    occ = t.occupations(s.gamma)
    assert np.all(occ > -1e-10) and np.all(occ < 1.0 + 1e-10)


def test_transfer_matrix_is_unimodular():
    T = em.transfer_matrix(8, 0.3, 0.2)
    assert abs(np.linalg.det(T)) == pytest.approx(1.0, abs=1e-10)
