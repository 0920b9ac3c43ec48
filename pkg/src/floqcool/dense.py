"""Exact statevector / density-matrix engine for small qubit registers.

This module is the numerical ground truth for the covariance-matrix engine: it
implements the same gate set (Pauli-string rotations, the fSim family, phase
gates), the mid-circuit auxiliary reset channel, and the single-qubit
decoherence channel, with no Gaussianity assumption.  Density matrices are
practical up to ~12 qubits, pure-state trajectories up to ~20.

States are stored as ndarrays of shape ``(2,)*n`` (vectors) or ``(2,)*2n``
(density matrices, ket axes first).  Qubits are indexed ``0..n-1`` and the
register order is also the Jordan-Wigner order used by
:func:`measure_majorana_covariance`.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

# ------------------------------------------------------------------ Pauli algebra

I2 = np.eye(2, dtype=complex)
X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = {"I": I2, "X": X, "Y": Y, "Z": Z}

MAX_RHO_QUBITS = 12
MAX_VECTOR_QUBITS = 20


def pauli_string_matrix(labels: str) -> np.ndarray:
    """Kronecker product of single-qubit Paulis, e.g. ``"XZY"``."""
    out = np.array([[1.0 + 0.0j]])
    for c in labels:
        out = np.kron(out, PAULIS[c])
    return out


def pauli_rotation_matrix(labels: str, angle: float) -> np.ndarray:
    """exp(-i angle/2 * P) for a Pauli string P (P^2 = 1)."""
    P = pauli_string_matrix(labels)
    d = P.shape[0]
    return np.cos(angle / 2.0) * np.eye(d) - 1j * np.sin(angle / 2.0) * P


def phase_z(h: float) -> np.ndarray:
    """Z^h = diag(1, e^{i pi h})."""
    return np.diag([1.0, np.exp(1j * np.pi * h)]).astype(complex)


def pauli_power(label: str, g: float) -> np.ndarray:
    """P^g for P in {X, Y, Z}, equal to e^{i pi g/2} exp(-i pi g/2 P)."""
    return np.exp(1j * np.pi * g / 2.0) * pauli_rotation_matrix(label, np.pi * g)


def fsim(theta: float, phi: float) -> np.ndarray:
    """fSim gate: excitation hopping with angle theta, |11> phase e^{i phi}.

    Acts as [[cos t, i sin t], [i sin t, cos t]] on the {|01>, |10>} block,
    so fsim(theta, 0) = iSWAP(theta) = exp(i theta (XX + YY)/2).
    """
    c, s = np.cos(theta), np.sin(theta)
    U = np.zeros((4, 4), dtype=complex)
    U[0, 0] = 1.0
    U[1, 1] = U[2, 2] = c
    U[1, 2] = U[2, 1] = 1j * s
    U[3, 3] = np.exp(1j * phi)
    return U


def cphase(phi: float) -> np.ndarray:
    return fsim(0.0, phi)


def iswap(theta: float) -> np.ndarray:
    return fsim(theta, 0.0)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    Q, R = np.linalg.qr(A)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def haar_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


# ------------------------------------------------------------------ channels

def reset_kraus(target: int) -> list[np.ndarray]:
    """Kraus pair implementing an unconditional reset to |target>.

    For target 1: K_1 = (n + s+)/sqrt(2), K_2 = (n - s+)/sqrt(2) with
    n = |1><1| and s+ = |1><0|; the channel maps any rho to |1><1|.  The
    target-0 pair is the X-conjugate.  Completeness K_1†K_1 + K_2†K_2 = 1
    holds exactly.
    """
    n1 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
    sp = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |1><0|
    if target == 1:
        return [(n1 + sp) / np.sqrt(2.0), (n1 - sp) / np.sqrt(2.0)]
    if target == 0:
        n0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
        sm = sp.conj().T
        return [(n0 + sm) / np.sqrt(2.0), (n0 - sm) / np.sqrt(2.0)]
    raise ValueError("reset target must be 0 or 1")


def decoherence_kraus(gamma_decay: float, gamma_dephase: float) -> list[np.ndarray]:
    """Kraus set for decay toward |0> composed with dephasing.

    Equals the unit-time integration of jump operators sqrt(gamma_decay) s-
    and sqrt(gamma_dephase/2) Z: rho_11 -> e^{-gd} rho_11, off-diagonals pick
    up e^{-gp - gd/2}, and rho_00 absorbs the decayed weight.
    """
    p = 1.0 - np.exp(-gamma_decay)
    pd = 0.5 * (1.0 - np.exp(-gamma_dephase))
    amp = [
        np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - p)]], dtype=complex),
        np.array([[0.0, np.sqrt(p)], [0.0, 0.0]], dtype=complex),
    ]
    deph = [np.sqrt(1.0 - pd) * I2, np.sqrt(pd) * Z]
    return [Kd @ Ka for Kd in deph for Ka in amp]


# ------------------------------------------------------------------ state class

class DenseState:
    """An n-qubit state, pure (``kind='vector'``) or mixed (``kind='rho'``)."""

    def __init__(self, n: int, kind: str = "rho", tensor: Optional[np.ndarray] = None):
        if kind not in ("vector", "rho"):
            raise ValueError("kind must be 'vector' or 'rho'")
        if kind == "rho" and n > MAX_RHO_QUBITS:
            raise ValueError(f"density matrices limited to {MAX_RHO_QUBITS} qubits")
        if kind == "vector" and n > MAX_VECTOR_QUBITS:
            raise ValueError(f"statevectors limited to {MAX_VECTOR_QUBITS} qubits")
        self.n = n
        self.kind = kind
        if tensor is None:
            raise ValueError("tensor required; use product_state()")
        self.t = tensor

    # -------------------------------------------------------------- constructors

    @classmethod
    def product_state(cls, bits: Sequence[int], kind: str = "rho") -> "DenseState":
        """Computational product state |b_0 b_1 ... b_{n-1}>."""
        n = len(bits)
        psi = np.zeros((2,) * n, dtype=complex)
        psi[tuple(int(b) for b in bits)] = 1.0
        if kind == "vector":
            return cls(n, "vector", psi)
        flat = psi.reshape(-1)
        rho = np.outer(flat, flat.conj()).reshape((2,) * (2 * n))
        return cls(n, "rho", rho)

    @classmethod
    def from_vector(cls, vec: np.ndarray, kind: str = "vector") -> "DenseState":
        n = int(np.log2(vec.size))
        assert 2 ** n == vec.size
        if kind == "vector":
            return cls(n, "vector", np.asarray(vec, dtype=complex).reshape((2,) * n))
        flat = np.asarray(vec, dtype=complex).reshape(-1)
        rho = np.outer(flat, flat.conj()).reshape((2,) * (2 * n))
        return cls(n, "rho", rho)

    def copy(self) -> "DenseState":
        return DenseState(self.n, self.kind, self.t.copy())

    @property
    def is_vector(self) -> bool:
        return self.kind == "vector"

    def vector(self) -> np.ndarray:
        if not self.is_vector:
            raise ValueError("not a pure-state vector")
        return self.t.reshape(-1)

    def density_matrix(self) -> np.ndarray:
        if self.is_vector:
            flat = self.vector()
            return np.outer(flat, flat.conj())
        return self.t.reshape(2 ** self.n, 2 ** self.n)

    # -------------------------------------------------------------- gate action

    def _apply_left(self, U: np.ndarray, qubits: Sequence[int]) -> None:
        """t <- U t on the ket axes (vector or rho)."""
        k = len(qubits)
        Ut = np.asarray(U, dtype=complex).reshape((2,) * (2 * k))
        src = list(qubits)
        self.t = np.moveaxis(
            np.tensordot(Ut, self.t, axes=(list(range(k, 2 * k)), src)),
            list(range(k)),
            src,
        )

    def _apply_right_dagger(self, U: np.ndarray, qubits: Sequence[int]) -> None:
        """rho <- rho U† on the bra axes."""
        k = len(qubits)
        # (rho U†)_{ab} pairs rho's bra axes with U†'s row index; implemented
        # as conj(U) acting on the bra axes from the left.
        Ut = np.asarray(U, dtype=complex).conj().reshape((2,) * (2 * k))
        src = [self.n + q for q in qubits]
        self.t = np.moveaxis(
            np.tensordot(Ut, self.t, axes=(list(range(k, 2 * k)), src)),
            list(range(k)),
            src,
        )

    def apply_unitary(self, U: np.ndarray, qubits: Sequence[int]) -> None:
        self._apply_left(U, qubits)
        if not self.is_vector:
            self._apply_right_dagger(U, qubits)

    def apply_pauli_rotation(self, labels: str, qubits: Sequence[int], angle: float) -> None:
        """Apply exp(-i angle/2 * P) without building the 2^k matrix.

        Uses U psi = cos(angle/2) psi - i sin(angle/2) P psi with P applied
        one qubit at a time, so long Jordan-Wigner strings stay cheap.
        """
        c = np.cos(angle / 2.0)
        s = np.sin(angle / 2.0)
        branch = self.copy()
        branch.apply_pauli_string(labels, qubits)
        if self.is_vector:
            self.t = c * self.t - 1j * s * branch.t
        else:
            # U rho U† with U = c - i s P:
            #   c^2 rho + s^2 P rho P - i c s (P rho - rho P)
            PrhoP = branch.copy()
            PrhoP._right_pauli_string(labels, qubits)
            rhoP = self.copy()
            rhoP._right_pauli_string(labels, qubits)
            self.t = (
                c * c * self.t
                + s * s * PrhoP.t
                - 1j * c * s * (branch.t - rhoP.t)
            )

    def apply_pauli_string(self, labels: str, qubits: Sequence[int]) -> None:
        """Left-multiply by the Pauli string (ket side only for rho)."""
        for c, q in zip(labels, qubits):
            if c != "I":
                self._apply_left(PAULIS[c], [q])

    def _right_pauli_string(self, labels: str, qubits: Sequence[int]) -> None:
        for c, q in zip(labels, qubits):
            if c != "I":
                k = 1
                Ut = PAULIS[c].T.reshape((2,) * (2 * k))  # P† = P; right mult pairs bra axis
                src = [self.n + q]
                self.t = np.moveaxis(
                    np.tensordot(Ut, self.t, axes=([1], src)), [0], src
                )

    # -------------------------------------------------------------- channels

    def apply_kraus(
        self,
        kraus: Sequence[np.ndarray],
        qubit: int,
        rng: Optional[np.random.Generator] = None,
    ) -> int:
        """Apply a single-qubit channel.

        Density matrices get the deterministic sum over Kraus terms; vectors
        sample one Kraus outcome (exact unraveling) and require ``rng``.
        Returns the sampled Kraus index for vectors, -1 for density matrices.
        """
        if self.is_vector:
            if rng is None:
                raise ValueError("trajectory sampling needs an rng")
            probs = []
            branches = []
            for K in kraus:
                b = self.copy()
                b._apply_left(K, [qubit])
                p = float(np.real(np.vdot(b.t, b.t)))
                probs.append(p)
                branches.append(b)
            probs = np.array(probs)
            probs = probs / probs.sum()
            idx = int(rng.choice(len(kraus), p=probs))
            self.t = branches[idx].t / np.linalg.norm(branches[idx].t.reshape(-1))
            return idx
        acc = None
        for K in kraus:
            b = self.copy()
            b._apply_left(K, [qubit])
            b._apply_right_dagger(K, [qubit])
            acc = b.t if acc is None else acc + b.t
        self.t = acc
        return -1

    def reset(self, qubit: int, target: int, rng: Optional[np.random.Generator] = None) -> None:
        self.apply_kraus(reset_kraus(target), qubit, rng=rng)

    def apply_decoherence(
        self,
        qubits: Iterable[int],
        gamma_decay: float,
        gamma_dephase: float,
        rng: Optional[np.random.Generator] = None,
    ) -> None:
        if gamma_decay == 0.0 and gamma_dephase == 0.0:
            return
        kraus = decoherence_kraus(gamma_decay, gamma_dephase)
        for q in qubits:
            self.apply_kraus(kraus, q, rng=rng)

    # -------------------------------------------------------------- observables

    def trace(self) -> float:
        if self.is_vector:
            return float(np.vdot(self.t, self.t).real)
        return float(np.trace(self.density_matrix()).real)

    def pauli_expectation(self, labels: str, qubits: Sequence[int]) -> float:
        """<P> for a Pauli string on the given qubits."""
        if self.is_vector:
            b = self.copy()
            b.apply_pauli_string(labels, qubits)
            return float(np.real(np.vdot(self.t, b.t)))
        b = self.copy()
        b.apply_pauli_string(labels, qubits)
        return float(np.real(np.trace(b.density_matrix())))

    def string_expectation(self, ops: str, positions: Sequence[int]) -> float:
        """Alias of :meth:`pauli_expectation` (engine-common interface)."""
        return self.pauli_expectation(ops, positions)

    def probability_one(self, qubit: int) -> float:
        return 0.5 * (1.0 - self.pauli_expectation("Z", [qubit]))

    def fidelity_pure(self, vec: np.ndarray) -> float:
        """<phi|rho|phi> against a pure reference state."""
        v = np.asarray(vec, dtype=complex).reshape(-1)
        if self.is_vector:
            return float(abs(np.vdot(v, self.vector())) ** 2)
        return float(np.real(np.vdot(v, self.density_matrix() @ v)))

    def partial_trace(self, keep: Sequence[int]) -> np.ndarray:
        """Reduced density matrix on ``keep`` (register order preserved)."""
        keep = list(keep)
        rest = [q for q in range(self.n) if q not in keep]
        if self.is_vector:
            perm = keep + rest
            psi = self.t.transpose(perm).reshape(2 ** len(keep), 2 ** len(rest))
            return psi @ psi.conj().T
        perm = keep + rest + [self.n + q for q in keep] + [self.n + q for q in rest]
        t = self.t.transpose(perm).reshape(
            2 ** len(keep), 2 ** len(rest), 2 ** len(keep), 2 ** len(rest)
        )
        return np.einsum("arbr->ab", t)

    def renyi2_entropy(self, sub: Sequence[int]) -> float:
        """S_2 = -log2 tr(rho_A^2) of the reduced state on ``sub``."""
        rho = self.partial_trace(sub)
        purity = float(np.real(np.trace(rho @ rho)))
        return -np.log2(max(purity, 1e-300))

    def renyi2_mutual_information(self, A: Sequence[int], B: Sequence[int]) -> float:
        SA = self.renyi2_entropy(A)
        SB = self.renyi2_entropy(B)
        SAB = self.renyi2_entropy(list(A) + list(B))
        return SA + SB - SAB


# ------------------------------------------------------------------ two-qubit metrics

def concurrence(rho2: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    YY = np.kron(Y, Y)
    rt = YY @ rho2.conj() @ YY
    evals = np.linalg.eigvals(rho2 @ rt)
    lam = np.sqrt(np.sort(np.abs(evals.real))[::-1])
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


# ------------------------------------------------------------------ scrambling

def apply_scrambling(
    state: DenseState,
    qubits: Sequence[int],
    cycles: int,
    rng: np.random.Generator,
) -> None:
    """Random-circuit scrambler: Haar single-qubit gates + brickwork CZ layers."""
    qs = list(qubits)
    CZ = cphase(np.pi)
    for d in range(cycles):
        for q in qs:
            state.apply_unitary(haar_unitary(2, rng), [q])
        start = d % 2
        for i in range(start, len(qs) - 1, 2):
            state.apply_unitary(CZ, [qs[i], qs[i + 1]])


# ------------------------------------------------------------------ fermionic readout

def measure_majorana_covariance(
    state: DenseState, positions: Optional[Sequence[int]] = None
) -> np.ndarray:
    """Covariance matrix gamma[m][n] = Im <a_m a_n> for Jordan-Wigner Majoranas.

    ``positions`` are register qubits (0-based, ascending); JW strings run over
    the *full* register order, so for a subset this matches the corresponding
    sub-block of the full-register covariance matrix.  Majoranas are
    interleaved: site p contributes a_{2i} = (prod_{k<p} Z_k) X_p and
    a_{2i+1} = (prod Z) Y_p for list index i.
    """
    if positions is None:
        positions = list(range(state.n))
    positions = list(positions)
    P = len(positions)

    def majorana_branch(m: int) -> DenseState:
        p = positions[m // 2]
        labels = "Z" * p + ("X" if m % 2 == 0 else "Y")
        b = state.copy()
        b.apply_pauli_string(labels, list(range(p)) + [p])
        return b

    gamma = np.zeros((2 * P, 2 * P))
    if state.is_vector:
        vecs = [majorana_branch(m).vector() for m in range(2 * P)]
        for m in range(2 * P):
            for nn in range(m + 1, 2 * P):
                g = np.vdot(vecs[m], vecs[nn])  # <a_m a_n> (a_m hermitian)
                gamma[m, nn] = g.imag
                gamma[nn, m] = -g.imag
    else:
        branches = [majorana_branch(m) for m in range(2 * P)]
        for m in range(2 * P):
            for nn in range(m + 1, 2 * P):
                b = branches[nn].copy()
                p = positions[m // 2]
                labels = "Z" * p + ("X" if m % 2 == 0 else "Y")
                b.apply_pauli_string(labels, list(range(p)) + [p])
                g = np.trace(b.density_matrix())
                gamma[m, nn] = g.imag
                gamma[nn, m] = -g.imag
    return gamma
