"""One-body RDM tests: measurement, basis transforms, purification, correlators."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floqcool.dense import DenseState
from floqcool.eigenmodes import solve_modes
from floqcool.gaussian import GaussianState
from floqcool.rdm import (
    OneBodyRDM,
    correlator_matrix,
    edge_mode_mask,
    measure_1rdm,
    purify,
    quantum_correlator,
    rdm_entropy,
    to_eigenbasis,
    vacuum_covariance,
    vacuum_fidelity,
    vacuum_rdm,
)

from conftest import apply_ops_to, random_rotation_ops


def _pair(n, depth, seed):
    rng = np.random.default_rng(seed)
    ops = random_rotation_ops(n, depth, rng)
    gs = GaussianState.product_state([0] * n)
    ds = DenseState.product_state([0] * n, kind="vector")
    apply_ops_to(gs, ops)
    apply_ops_to(ds, ops)
    return gs, ds


# ------------------------------------------------------------------ measurement

def test_cross_engine_1rdm_agreement():
    gs, ds = _pair(4, 30, seed=11)
    Dg = measure_1rdm(gs).matrix
    Dd = measure_1rdm(ds).matrix
    assert np.max(np.abs(Dg - Dd)) < 1e-12


def test_1rdm_structure():
    gs, _ = _pair(3, 20, seed=5)
    D = measure_1rdm(gs)
    assert D.n_sites == 3
    assert np.max(np.abs(D.matrix - D.matrix.conj().T)) < 1e-13
    assert np.trace(D.matrix).real == pytest.approx(3.0, abs=1e-12)
    # pure state: idempotent
    assert np.max(np.abs(D.matrix @ D.matrix - D.matrix)) < 1e-12
    assert np.max(np.abs(D.gamma() - gs.gamma)) < 1e-12


def test_1rdm_subset_matches_full():
    gs, ds = _pair(5, 40, seed=9)
    sub = [1, 2, 3]
    Dg = measure_1rdm(gs, sites=sub).matrix
    Dd = measure_1rdm(ds, sites=sub).matrix
    assert np.max(np.abs(Dg - Dd)) < 1e-12
    idx = [m for s in sub for m in (2 * s, 2 * s + 1)]
    full = measure_1rdm(gs).matrix
    assert np.max(np.abs(Dg - full[np.ix_(idx, idx)])) < 1e-13


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=20, deadline=None)
def test_spectrum_pairs_about_half(seed):
    gs, _ = _pair(3, 15, seed=seed)
    # dephase to get a mixed 1RDM
    gs.dephase_mean([0.3] * gs.n)
    lam = measure_1rdm(gs).eigenvalues()
    assert np.max(np.abs(lam + lam[::-1] - 1.0)) < 1e-10
    assert lam.min() > -1e-12 and lam.max() < 1 + 1e-12


# ------------------------------------------------------------------ eigenbasis

def test_vacuum_rdm_is_idempotent_with_zero_occupations():
    table = solve_modes(6, 0.2, 0.2)
    D = vacuum_rdm(table)
    assert np.max(np.abs(D.matrix @ D.matrix - D.matrix)) < 1e-12
    occ = to_eigenbasis(D, table).occupations()
    assert np.max(np.abs(occ)) < 1e-12
    g = vacuum_covariance(table)
    assert np.max(np.abs(g + g.T)) < 1e-13
    assert np.max(np.abs(g @ g.T - np.eye(12))) < 1e-12


def test_eigenbasis_round_trip():
    table = solve_modes(4, 0.3, 0.15)
    gs, _ = _pair(4, 25, seed=21)
    D = measure_1rdm(gs)
    E = to_eigenbasis(D, table)
    back = E.transform.conj().T @ E.matrix @ E.transform
    assert np.max(np.abs(back - D.matrix)) < 1e-12
    # unitary transform preserves the spectrum
    assert np.max(np.abs(E.eigenvalues() - D.eigenvalues())) < 1e-10


def test_single_quasiparticle_occupations():
    L = 4
    table = solve_modes(L, 0.2, 0.2)
    V = to_eigenbasis(vacuum_rdm(table), table).transform
    k = 2
    diag = np.concatenate([np.ones(L), np.zeros(L)])  # vacuum: <eta eta^dag> = I
    diag[k] = 0.0          # <eta_k eta_k^dag> = 0
    diag[L + k] = 1.0      # <eta_k^dag eta_k> = 1
    D_maj = OneBodyRDM(V.conj().T @ np.diag(diag) @ V, basis="majorana")
    occ = to_eigenbasis(D_maj, table).occupations()
    expect = np.zeros(L)
    expect[k] = 1.0
    assert np.max(np.abs(occ - expect)) < 1e-12


def test_cooled_occupations_frozen():
    """Quasiparticle content of the fully polarized initial state."""
    table = solve_modes(6, 0.2, 0.2)
    gs = GaussianState.product_state([0] * 6)
    occ = to_eigenbasis(measure_1rdm(gs), table).occupations()
    frozen = [0.13367696, 0.25028356, 0.19909637, 0.12927646, 0.06387748, 0.01709079]
    assert np.max(np.abs(occ - frozen)) < 1e-6


def test_mode_block_consistency():
    table = solve_modes(4, 0.2, 0.2)
    gs, _ = _pair(4, 25, seed=33)
    E = to_eigenbasis(measure_1rdm(gs), table)
    L = 4
    pm = E.mode_block("+-")
    mp = E.mode_block("-+")
    assert np.max(np.abs(np.diag(pm).real - E.occupations())) < 1e-12
    # anticommutation: <eta_i eta_j^dag> + <eta_j^dag eta_i> = delta_ij
    assert np.max(np.abs(mp + pm.T - np.eye(L))) < 1e-12
    # pure anomalous blocks are conjugate transposes of each other
    assert np.max(np.abs(E.mode_block("--") - E.mode_block("++").conj().T)) < 1e-12


def test_basis_guards():
    table = solve_modes(4, 0.2, 0.2)
    D = vacuum_rdm(table)
    with pytest.raises(ValueError):
        D.occupations()
    E = to_eigenbasis(D, table)
    with pytest.raises(ValueError):
        E.gamma()
    with pytest.raises(ValueError):
        to_eigenbasis(E, table)
    with pytest.raises(ValueError):
        to_eigenbasis(vacuum_rdm(solve_modes(6, 0.2, 0.2)), table)


# ------------------------------------------------------------------ purification

def test_purify_projects_to_top_eigenvectors():
    gs, _ = _pair(4, 30, seed=41)
    gs.dephase_mean([0.25] * gs.n)
    D = measure_1rdm(gs)
    P = purify(D)
    M = P.matrix
    assert np.max(np.abs(M @ M - M)) < 1e-10
    assert np.trace(M).real == pytest.approx(4.0, abs=1e-10)
    # agrees with explicit top-L eigenprojection when spectrum is nondegenerate
    lam, vec = np.linalg.eigh(D.matrix)
    top = vec[:, -4:]
    assert np.max(np.abs(top @ top.conj().T - M)) < 1e-8


def test_purify_fixes_pure_states():
    gs, _ = _pair(3, 20, seed=7)
    D = measure_1rdm(gs)
    P = purify(D)
    assert np.max(np.abs(P.matrix - D.matrix)) < 1e-10


def test_purify_eigenmode_basis_round_trip():
    table = solve_modes(4, 0.2, 0.2)
    gs, _ = _pair(4, 30, seed=13)
    gs.dephase_mean([0.2] * gs.n)
    D = measure_1rdm(gs)
    E = to_eigenbasis(D, table)
    P_then_transform = to_eigenbasis(purify(D), table).matrix
    transform_then_P = purify(E).matrix
    assert np.max(np.abs(P_then_transform - transform_then_P)) < 1e-9


def test_purify_warns_on_degenerate_cut():
    gs = GaussianState.product_state([0, 0])
    gs.dephase_mean([50.0] * gs.n)  # drives a rotation parameter to zero
    gs.gamma[0, 1] = gs.gamma[1, 0] = 0.0  # exactly degenerate site
    with pytest.warns(RuntimeWarning):
        purify(measure_1rdm(gs))


# ------------------------------------------------------------------ fidelity

def test_vacuum_fidelity_product_rule():
    assert vacuum_fidelity([0.0, 0.0, 0.0]) == pytest.approx(1.0)
    assert vacuum_fidelity([0.5, 0.5]) == pytest.approx(0.25)
    assert vacuum_fidelity([0.1, 0.2], exclude=[False, True]) == pytest.approx(0.9)
    with pytest.raises(ValueError):
        vacuum_fidelity([0.1, 0.2], exclude=[True])


def test_edge_mode_mask():
    table = solve_modes(12, 0.1, 0.3)  # ordered phase: one boundary mode
    mask = edge_mode_mask(table)
    assert mask.sum() == 1
    assert mask[0]  # lowest quasienergy is the boundary mode
    by_phi = edge_mode_mask(table, phi_threshold=float(table.phis[0]) * 1.5)
    assert np.array_equal(mask, by_phi)
    assert edge_mode_mask(solve_modes(8, 0.3, 0.15)).sum() == 0


# ------------------------------------------------------------------ correlators

def test_quantum_correlator_matches_dense_string():
    gs, ds = _pair(5, 40, seed=55)
    D = measure_1rdm(gs)
    for j, k in [(0, 1), (0, 4), (1, 3), (2, 4)]:
        label = "Y" + "Z" * (k - j - 1) + "Y"
        want = ds.string_expectation(label, list(range(j, k + 1)))
        assert quantum_correlator(D, j, k) == pytest.approx(want, abs=1e-12)


def test_correlator_matrix_is_symmetric_table():
    gs, _ = _pair(4, 30, seed=3)
    D = measure_1rdm(gs)
    C = correlator_matrix(D)
    assert np.max(np.abs(C - C.T)) < 1e-14
    assert np.allclose(np.diag(C), 0.0)
    assert C[1, 3] == pytest.approx(quantum_correlator(D, 1, 3), abs=1e-14)


def test_quantum_correlator_validates_indices():
    D = measure_1rdm(GaussianState.product_state([0, 0, 0]))
    with pytest.raises(ValueError):
        quantum_correlator(D, 2, 1)
    with pytest.raises(ValueError):
        quantum_correlator(D, 0, 3)


# ------------------------------------------------------------------ entropy

def test_rdm_entropy_matches_engine():
    gs, _ = _pair(5, 40, seed=17)
    D = measure_1rdm(gs)
    for block in ([0, 1], [1, 2, 3], [0, 1, 2, 3, 4]):
        assert rdm_entropy(D, block) == pytest.approx(
            gs.entanglement_entropy(block), abs=1e-10
        )


def test_rdm_entropy_zero_for_product():
    D = measure_1rdm(GaussianState.product_state([0, 1, 0, 1]))
    assert rdm_entropy(D, [1, 2]) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        rdm_entropy(D, [0, 2])
