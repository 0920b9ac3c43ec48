"""Shared helpers for the test suite."""

import numpy as np
import pytest


def random_rotation_ops(n, depth, rng, kinds=("Z", "XX", "YY", "XY", "YX")):
    """Random sequence of quadratic Pauli rotations on an n-site chain.

    Each entry is ``(labels, qubits, angle)`` for exp(-i angle/2 P) with P a
    single-site Z or a nearest-neighbour two-endpoint string — exactly the
    generators both engines support.
    """
    ops = []
    for _ in range(depth):
        k = kinds[rng.integers(len(kinds))]
        angle = float(rng.uniform(-np.pi, np.pi))
        if k == "Z":
            ops.append(("Z", [int(rng.integers(n))], angle))
        else:
            q = int(rng.integers(n - 1))
            ops.append((k, [q, q + 1], angle))
    return ops


def apply_ops_to(state, ops):
    for labels, qubits, angle in ops:
        state.apply_pauli_rotation(labels, qubits, angle)
    return state


@pytest.fixture
def rng():
    return np.random.default_rng(20240823)
