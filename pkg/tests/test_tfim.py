"""Transverse-field Ising reference results vs exact diagonalization."""

import numpy as np
import pytest

from floqcool import tfim
from floqcool.gaussian import GaussianState


@pytest.mark.parametrize("L,g,J", [(2, 0.5, 0.3), (3, 0.2, 0.2), (4, 1.0, 0.7), (6, 0.3, 0.9)])
def test_ground_energy_matches_exact_diagonalization(L, g, J):
    e_free = tfim.ground_energy(L, g, J)
    e_ed, _ = tfim.ed_ground(L, g, J)
    assert e_free == pytest.approx(e_ed, abs=1e-10)


def test_single_site_ground_state():
    # H = -g Z: ground state |0> with E = -g, covariance block +1
    assert tfim.ground_energy(1, 0.7, 0.0) == pytest.approx(-0.7)
    gam = tfim.ground_covariance(1, 0.7, 0.0)
    assert gam[0, 1] == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("L,g,J", [(3, 0.4, 0.25), (5, 0.2, 0.2), (4, 0.15, 0.6)])
def test_ground_covariance_reproduces_energy_and_purity(L, g, J):
    gam = tfim.ground_covariance(L, g, J)
    assert np.max(np.abs(gam + gam.T)) < 1e-12
    assert np.max(np.abs(gam @ gam.T - np.eye(2 * L))) < 1e-10  # pure state
    e = tfim.energy_from_covariance(gam, g, J)
    assert e == pytest.approx(tfim.ground_energy(L, g, J), abs=1e-10)


def test_ground_covariance_correlators_match_ed():
    L, g, J = 4, 0.3, 0.5
    gam = tfim.ground_covariance(L, g, J)
    _, psi = tfim.ed_ground(L, g, J)
    from floqcool.dense import DenseState, measure_majorana_covariance

    state = DenseState.from_vector(psi, kind="vector")
    gam_ed = measure_majorana_covariance(state, list(range(L)))
    # ED ground states are real up to sign; covariances must agree entrywise
    assert np.max(np.abs(gam - gam_ed)) < 1e-8


def test_energy_of_product_states():
    # all-|0>: <Z_j> = +1, bond terms vanish -> E = -g L
    g0 = GaussianState.product_state([0, 0, 0, 0]).gamma
    assert tfim.energy_from_covariance(g0, 0.3, 0.9) == pytest.approx(-1.2)
    g1 = GaussianState.all_ones(4).gamma
    assert tfim.energy_from_covariance(g1, 0.3, 0.9) == pytest.approx(1.2)


def test_single_particle_energies_positive_and_sized():
    eps = tfim.single_particle_energies(5, 0.3, 0.7)
    assert eps.shape == (5,)
    assert np.all(eps > 0.0)
    # strong transverse field: energies cluster near 2g
    eps_g = tfim.single_particle_energies(4, 5.0, 0.1)
    assert np.max(np.abs(eps_g - 10.0)) < 0.5


def test_string_correlator_matrix_definition():
    L = 3
    gam = tfim.ground_covariance(L, 0.4, 0.6)
    C = tfim.string_correlator_matrix(gam)
    assert C[0, 2] == pytest.approx(-gam[0, 5])
    assert np.max(np.abs(C - C.T)) == 0.0
    assert np.all(np.diag(C) == 0.0)
