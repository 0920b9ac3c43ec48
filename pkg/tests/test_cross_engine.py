"""Covariance-matrix engine vs dense engine on identical circuits."""

import numpy as np
import pytest

from floqcool import dense
from floqcool.cooling import CoolingConfig, run_cooling_dense, run_cooling_gaussian
from floqcool.dense import DenseState
from floqcool.gaussian import GaussianState

from conftest import random_rotation_ops


def both_states(bits):
    return (
        GaussianState.product_state(bits),
        DenseState.product_state(bits, kind="vector"),
    )


@pytest.mark.parametrize("L,seed", [(2, 0), (3, 1), (4, 2), (4, 3)])
def test_random_quadratic_circuits_agree(L, seed):
    rng = np.random.default_rng(seed)
    ops = random_rotation_ops(L, 30, rng)
    gs, ds = both_states([int(b) for b in rng.integers(0, 2, size=L)])
    for labels, qubits, angle in ops:
        gs.apply_pauli_rotation(labels, qubits, angle)
        ds.apply_pauli_rotation(labels, qubits, angle)
    for j in range(L):
        assert gs.expect_z(j) == pytest.approx(ds.pauli_expectation("Z", [j]), abs=1e-12)
    for j in range(L - 1):
        for ops2 in ("XX", "YY", "XY", "YX"):
            assert gs.string_expectation(ops2, [j, j + 1]) == pytest.approx(
                ds.pauli_expectation(ops2, [j, j + 1]), abs=1e-12
            )
        assert gs.string_expectation("ZZ", [j, j + 1]) == pytest.approx(
            ds.pauli_expectation("ZZ", [j, j + 1]), abs=1e-12
        )
    assert gs.parity() == pytest.approx(ds.pauli_expectation("Z" * L, list(range(L))), abs=1e-10)
    gamma_dense = dense.measure_majorana_covariance(ds, list(range(L)))
    assert np.max(np.abs(gs.gamma - gamma_dense)) < 1e-12


def test_long_string_expectations_agree(rng):
    L = 4
    ops = random_rotation_ops(L, 25, rng)
    gs, ds = both_states([0, 1, 1, 0])
    for labels, qubits, angle in ops:
        gs.apply_pauli_rotation(labels, qubits, angle)
        ds.apply_pauli_rotation(labels, qubits, angle)
    for s in ("XZZX", "YZZY", "XZZY", "YZZX"):
        assert gs.string_expectation(s, [0, 1, 2, 3]) == pytest.approx(
            ds.pauli_expectation(s, [0, 1, 2, 3]), abs=1e-12
        )


def test_pauli_gates_agree(rng):
    gs, ds = both_states([0, 1, 0])
    script = [("X", 0), ("Y", 2), ("Z", 1), ("X", 1)]
    for k, (lab, site) in enumerate(script):
        gs.apply_pauli_gate(lab, site)
        ds.apply_pauli_string(lab, [site])
        more = random_rotation_ops(3, 4, rng)
        for labels, qubits, angle in more:
            gs.apply_pauli_rotation(labels, qubits, angle)
            ds.apply_pauli_rotation(labels, qubits, angle)
        gamma_dense = dense.measure_majorana_covariance(ds, [0, 1, 2])
        assert np.max(np.abs(gs.gamma - gamma_dense)) < 1e-12


@pytest.mark.parametrize("site,target", [(0, 0), (0, 1), (2, 0), (2, 1)])
def test_reset_channel_agrees_at_register_ends(site, target, rng):
    """Qubit reset == fermionic mode reset when no string crosses the site.

    At the first or last register position the Jordan-Wigner strings of all
    other observables avoid (or cancel across) the reset site, so the two
    engines implement the same channel.  Interior resets differ by string
    parity factors; the protocols only reset end-of-register qubits in every
    configuration that runs on both engines.
    """
    gs = GaussianState.product_state([0, 1, 0])
    ds = DenseState.product_state([0, 1, 0], kind="rho")
    ops = random_rotation_ops(3, 15, rng)
    for labels, qubits, angle in ops:
        gs.apply_pauli_rotation(labels, qubits, angle)
        ds.apply_pauli_rotation(labels, qubits, angle)
    gs.reset(site, target)
    ds.reset(site, target)
    for j in range(3):
        assert gs.expect_z(j) == pytest.approx(ds.pauli_expectation("Z", [j]), abs=1e-12)
    gamma_dense = dense.measure_majorana_covariance(ds, [0, 1, 2])
    assert np.max(np.abs(gs.gamma - gamma_dense)) < 1e-12


def test_mean_dephasing_matches_dense_channel(rng):
    """The averaged covariance tracks the dense dephasing channel exactly."""
    rate = 0.35
    gs = GaussianState.product_state([0, 1, 0])
    ds = DenseState.product_state([0, 1, 0], kind="rho")
    for labels, qubits, angle in random_rotation_ops(3, 15, rng):
        gs.apply_pauli_rotation(labels, qubits, angle)
        ds.apply_pauli_rotation(labels, qubits, angle)
    gs.dephase_mean([rate] * 3)
    ds.apply_decoherence(range(3), 0.0, rate)
    for j in range(3):
        assert gs.expect_z(j) == pytest.approx(ds.pauli_expectation("Z", [j]), abs=1e-12)
    for s, q in (("XX", [0, 1]), ("YY", [1, 2]), ("XZY", [0, 1, 2])):
        assert gs.string_expectation(s, q) == pytest.approx(
            ds.pauli_expectation(s, q), abs=1e-12
        )


def test_cooling_protocol_energy_traces_agree():
    """Full dissipative cooling protocol on both engines, cycle by cycle."""
    cfg = CoolingConfig(L=4, g=0.2, J=0.2, theta=0.11 * np.pi, h=1.65,
                        reset_period=4, cycles=40, engine="gaussian", seed=7)
    rec_g = run_cooling_gaussian(cfg, record_energy=True)
    rec_d = run_cooling_dense(cfg, record_energy=True)
    eg = np.asarray(rec_g.energies)
    ed = np.asarray(rec_d.energies)
    assert eg.shape == ed.shape
    assert np.max(np.abs(eg - ed)) < 1e-12
