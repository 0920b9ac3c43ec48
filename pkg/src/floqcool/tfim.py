"""Reference results for the transverse-field Ising chain.

The chain Hamiltonian (open boundaries) is

    H = -g sum_j Z_j + J sum_j X_j X_{j+1}

which under the package's Jordan-Wigner convention is the quadratic form
H = (i/4) a^T h a with h_{2j,2j+1} = 2g and h_{2j+1,2j+2} = -2J (0-based
sites).  This module provides the exact ground-state energy, the ground-state
Majorana covariance matrix, and exact-diagonalization cross-checks used as
oracles in the tests.
"""

from __future__ import annotations

import numpy as np

from . import dense


def quadratic_hamiltonian(L: int, g: float, J: float) -> np.ndarray:
    """Antisymmetric h with H = (i/4) a^T h a."""
    h = np.zeros((2 * L, 2 * L))
    for j in range(L):
        h[2 * j, 2 * j + 1] = 2.0 * g
        h[2 * j + 1, 2 * j] = -2.0 * g
    for j in range(L - 1):
        h[2 * j + 1, 2 * j + 2] = -2.0 * J
        h[2 * j + 2, 2 * j + 1] = 2.0 * J
    return h


def single_particle_energies(L: int, g: float, J: float) -> np.ndarray:
    """Positive single-particle energies eps_k (eigenvalues of i h)."""
    h = quadratic_hamiltonian(L, g, J)
    ev = np.linalg.eigvalsh(1j * h)
    return np.sort(ev[ev > 0.0])


def ground_energy(L: int, g: float, J: float) -> float:
    """Exact ground-state energy E_0 = -(1/2) sum_k eps_k."""
    return float(-0.5 * np.sum(single_particle_energies(L, g, J)))


def ground_covariance(L: int, g: float, J: float) -> np.ndarray:
    """Majorana covariance matrix of the ground state.

    gamma = Im(2 P_+) with P_+ the projector onto the positive eigenspace of
    i h; verified against the single-site case (ground of -gZ is |0>, block
    +1) and against exact diagonalization in the tests.
    """
    h = quadratic_hamiltonian(L, g, J)
    ev, V = np.linalg.eigh(1j * h)
    P = V[:, ev > 0.0]
    return np.imag(2.0 * (P @ P.conj().T))


def energy_from_covariance(gamma: np.ndarray, g: float, J: float) -> float:
    """<H> of a Gaussian state of the bare chain (no auxiliaries)."""
    L = gamma.shape[0] // 2
    e = -g * sum(gamma[2 * j, 2 * j + 1] for j in range(L))
    e += J * sum(gamma[2 * j + 1, 2 * j + 2] for j in range(L - 1))
    return float(e)


# ------------------------------------------------------------------ ED oracles

def dense_hamiltonian(L: int, g: float, J: float) -> np.ndarray:
    """Explicit 2^L x 2^L matrix (for L <= 10 cross-checks)."""
    dim = 2 ** L
    H = np.zeros((dim, dim), dtype=complex)
    for j in range(L):
        H -= g * dense.pauli_string_matrix("I" * j + "Z" + "I" * (L - j - 1))
    for j in range(L - 1):
        H += J * dense.pauli_string_matrix("I" * j + "XX" + "I" * (L - j - 2))
    return H


def ed_ground(L: int, g: float, J: float):
    """(energy, state vector) from exact diagonalization."""
    ev, V = np.linalg.eigh(dense_hamiltonian(L, g, J))
    return float(ev[0]), V[:, 0]


def string_correlator_matrix(gamma: np.ndarray) -> np.ndarray:
    """C[j][k] = <Y_j (prod_{j<m<k} Z_m) Y_k> = -gamma[2j][2k+1] for j < k."""
    L = gamma.shape[0] // 2
    C = np.zeros((L, L))
    for j in range(L):
        for k in range(j + 1, L):
            C[j, k] = -gamma[2 * j, 2 * k + 1]
            C[k, j] = C[j, k]
    return C
