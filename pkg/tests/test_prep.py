"""Unitary ladder compilation and the dissipative-vs-unitary comparison."""

import numpy as np
import pytest

from floqcool.cooling import NoiseRates
from floqcool.dense import DenseState
from floqcool.eigenmodes import solve_modes
from floqcool.gaussian import GaussianState
from floqcool.prep import (
    CompilationError,
    comparison_point,
    compile_prep,
    execute_prep,
    trajectory_comparison_point,
)
from floqcool.rdm import measure_1rdm, to_eigenbasis, vacuum_fidelity


def _prep_occupations(table, state):
    return to_eigenbasis(measure_1rdm(state), table).occupations()


# ------------------------------------------------------------- compilation

@pytest.mark.parametrize("L", [2, 3, 4, 6, 8, 10])
def test_plan_shape(L):
    plan = compile_prep(solve_modes(L, 0.2, 0.2))
    assert plan.gate_count == L * (L - 1) // 2
    assert len(plan.layers) == 2 * L - 3
    assert plan.residual < 1e-10
    for gate in plan.gates:
        assert 0 <= gate.site < L - 1
        assert np.isfinite(gate.theta) and np.isfinite(gate.phi)
    # layer boundaries are sorted gate indices partitioning the list
    bounds = list(plan.layers) + [plan.gate_count]
    assert bounds[0] == 0
    assert all(a < b for a, b in zip(bounds, bounds[1:]))
    # gates inside one layer form a parallel time step: no shared qubits
    for a, b in zip(bounds, bounds[1:]):
        qubits = [q for g in plan.gates[a:b] for q in (g.site, g.site + 1)]
        assert len(set(qubits)) == len(qubits)


@pytest.mark.parametrize("L,g,J", [(5, -0.2, 0.2), (12, 0.02, 0.3)])
def test_parity_flip_plans_still_reach_vacuum(L, g, J):
    table = solve_modes(L, g, J)
    plan = compile_prep(table)
    assert plan.parity_flip
    state = GaussianState.product_state([0] * L)
    execute_prep(plan, state)
    occs = _prep_occupations(table, state)
    assert np.max(np.abs(occs)) < 1e-10


def test_overtight_tolerance_raises():
    with pytest.raises(CompilationError):
        compile_prep(solve_modes(6, 0.2, 0.2), tol=1e-16)


# ------------------------------------------------------------- noiseless runs

@pytest.mark.parametrize("L,g,J", [(4, 0.2, 0.2), (6, 0.3, 0.15), (10, 0.2, 0.2)])
def test_noiseless_ladder_reaches_vacuum(L, g, J):
    table = solve_modes(L, g, J)
    plan = compile_prep(table)
    state = GaussianState.product_state([0] * L)
    execute_prep(plan, state)
    occs = _prep_occupations(table, state)
    assert vacuum_fidelity(occs) > 1.0 - 1e-6
    assert np.max(np.abs(occs)) < 1e-10


def test_ladder_matches_dense_engine():
    L = 6
    table = solve_modes(L, 0.2, 0.2)
    plan = compile_prep(table)
    gs = GaussianState.product_state([0] * L)
    ds = DenseState.product_state([0] * L, kind="vector")
    execute_prep(plan, gs)
    execute_prep(plan, ds)
    assert np.max(np.abs(gs.gamma - measure_1rdm(ds).gamma())) < 1e-10


# ------------------------------------------------------------- validation

def test_execute_prep_validation():
    plan = compile_prep(solve_modes(4, 0.2, 0.2))
    with pytest.raises(ValueError):
        execute_prep(plan, GaussianState.product_state([0] * 5))
    noise = NoiseRates(gamma_decay=0.0, gamma_dephase=0.02)
    with pytest.raises(ValueError):
        execute_prep(plan, GaussianState.product_state([0] * 4),
                     noise=noise, trajectory=True)  # trajectory needs an rng
    decay = NoiseRates(gamma_decay=0.02, gamma_dephase=0.0)
    with pytest.raises(ValueError):
        # averaged decay is not a Gaussian channel
        execute_prep(plan, GaussianState.product_state([0] * 4), noise=decay)


# ------------------------------------------------------------- comparisons

def test_comparison_point_columns():
    row = comparison_point(6, NoiseRates(gamma_decay=0.0, gamma_dephase=0.02))
    assert row["L"] == 6
    assert row["gates"] == 15
    for tag in ("diss", "unit"):
        assert row[f"occ_{tag}"].shape == (6,)
        assert 0.0 <= row[f"fid_{tag}"] <= 1.0
        assert 0.0 <= row[f"fid_{tag}_pure"] <= 1.0
        # snapping to the nearest pure state can only sharpen these fidelities
        assert row[f"fid_{tag}_pure"] >= row[f"fid_{tag}"] - 1e-12


def test_comparison_noiseless_limit():
    row = comparison_point(6, NoiseRates())
    assert row["fid_unit"] > 1.0 - 1e-6


def test_trajectory_comparison_point_small():
    noise = NoiseRates(gamma_decay=0.01, gamma_dephase=0.01)
    row = trajectory_comparison_point(4, noise, trajectories=40, cycles=30, seed=3)
    assert row["trajectories"] == 40
    for tag in ("diss", "unit"):
        occs = row[f"occ_{tag}"]
        assert occs.shape == (4,)
        assert np.all(np.isfinite(occs))
        assert 0.0 < row[f"fid_{tag}"] < 1.0
        assert row[f"fid_{tag}_pure"] > row[f"fid_{tag}"]


def test_trajectory_comparison_is_seeded():
    noise = NoiseRates(gamma_decay=0.01, gamma_dephase=0.01)
    a = trajectory_comparison_point(4, noise, trajectories=12, cycles=12, seed=7)
    b = trajectory_comparison_point(4, noise, trajectories=12, cycles=12, seed=7)
    assert a["fid_diss"] == b["fid_diss"]
    assert a["fid_unit"] == b["fid_unit"]
