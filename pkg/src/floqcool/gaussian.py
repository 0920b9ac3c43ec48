"""Covariance-matrix engine for matchgate (free-fermion) circuits.

The state of an N-qubit register is the real antisymmetric matrix
``gamma[m][n] = Im <a_m a_n>`` of Jordan-Wigner Majorana operators
(``<a_m a_n> = delta_mn + i gamma[m][n]``), with the interleaved convention

    a_{2j}   = (prod_{k<j} Z_k) X_j,      a_{2j+1} = (prod_{k<j} Z_k) Y_j

for 0-based site j.  Pure states satisfy gamma gamma^T = 1.  Matchgate
unitaries act as special-orthogonal conjugations gamma -> R gamma R^T; the
supported gate set is exactly the Pauli-string rotations whose strings are
quadratic in Majoranas (single-site Z, and two-endpoint X/Y strings with
Z-filled interior), plus Pauli gates, mid-circuit resets, and single-qubit
dephasing (trajectory sampling or the exact mean channel).

Sign conventions are locked against the dense engine in the test suite; the
useful dictionary entries are

    <Z_j>                = +gamma[2j][2j+1]
    <X_j Z.. X_k>        = +gamma[2j+1][2k]
    <Y_j Z.. Y_k>        = -gamma[2j][2k+1]
    <X_j X_{j+1}>        = +gamma[2j+1][2j+2]
    <Z_j Z_k>            = g01*g23 - g02*g13 + g03*g12   (Wick, indices
                           (2j, 2j+1, 2k, 2k+1))

and exp(-(b/2) a_m a_n) rotates a_m -> cos(b) a_m - sin(b) a_n,
a_n -> sin(b) a_m + cos(b) a_n.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.linalg


def binary_entropy(x: np.ndarray) -> np.ndarray:
    """H2(x) in bits, safe at the endpoints."""
    x = np.clip(np.asarray(x, dtype=float), 1e-300, 1.0)
    y = np.clip(1.0 - x, 1e-300, 1.0)
    return -(x * np.log2(x) + y * np.log2(y))


def antisymmetric_block_spectrum(gamma: np.ndarray) -> np.ndarray:
    """Williamson-type spectrum nu_l >= 0 of a real antisymmetric matrix.

    These are the rotation parameters of the 2x2 blocks in the real Schur
    form; for a covariance matrix they lie in [0, 1] up to roundoff.
    """
    ev = np.linalg.eigvalsh(1j * gamma)
    return np.sort(ev[ev > -1e-12])[::-1][: gamma.shape[0] // 2]


class GaussianState:
    """Gaussian state of ``n`` sites as a 2n x 2n Majorana covariance matrix."""

    def __init__(self, gamma: np.ndarray):
        gamma = np.asarray(gamma, dtype=float)
        if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1] or gamma.shape[0] % 2:
            raise ValueError("gamma must be 2n x 2n")
        self.gamma = gamma
        self.n = gamma.shape[0] // 2

    # -------------------------------------------------------------- constructors

    @classmethod
    def product_state(cls, bits: Sequence[int]) -> "GaussianState":
        """Computational product state; site in |0> has gamma block +1."""
        n = len(bits)
        g = np.zeros((2 * n, 2 * n))
        for j, b in enumerate(bits):
            s = 1.0 if int(b) == 0 else -1.0
            g[2 * j, 2 * j + 1] = s
            g[2 * j + 1, 2 * j] = -s
        return cls(g)

    @classmethod
    def all_ones(cls, n: int) -> "GaussianState":
        """|1>^n — the Jordan-Wigner fermionic vacuum in this convention."""
        return cls.product_state([1] * n)

    @classmethod
    def random_pure(cls, n: int, rng: np.random.Generator) -> "GaussianState":
        """Scrambled pure Gaussian state: random SO(2n) frame of a product state."""
        A = rng.normal(size=(2 * n, 2 * n))
        Q, R = np.linalg.qr(A)
        Q = Q * np.sign(np.diag(R))
        if np.linalg.det(Q) < 0:
            Q[:, 0] = -Q[:, 0]
        g0 = cls.product_state([0] * n).gamma
        return cls(Q @ g0 @ Q.T)

    def copy(self) -> "GaussianState":
        return GaussianState(self.gamma.copy())

    # -------------------------------------------------------------- unitaries

    def rotate_pair(self, m: int, k: int, beta: float) -> None:
        """Conjugate by exp(-(beta/2) a_m a_k)."""
        c, s = np.cos(beta), np.sin(beta)
        g = self.gamma
        rm = c * g[m, :] - s * g[k, :]
        rk = s * g[m, :] + c * g[k, :]
        g[m, :], g[k, :] = rm, rk
        cm = c * g[:, m] - s * g[:, k]
        ck = s * g[:, m] + c * g[:, k]
        g[:, m], g[:, k] = cm, ck

    def apply_orthogonal(self, R: np.ndarray) -> None:
        self.gamma = R @ self.gamma @ R.T

    def apply_pauli_rotation(self, labels: str, qubits: Sequence[int], angle: float) -> None:
        """Apply exp(-i angle/2 P) for a Jordan-Wigner-quadratic Pauli string."""
        m, k, beta = _string_rotation(labels, qubits, angle)
        self.rotate_pair(m, k, beta)

    def apply_pauli_gate(self, label: str, site: int) -> None:
        """Pauli X/Y/Z gate (an O(2n) conjugation with det -1 for X and Y)."""
        signs = np.ones(2 * self.n)
        if label == "Z":
            signs[2 * site] = signs[2 * site + 1] = -1.0
        elif label == "X":
            signs[2 * site + 1] = -1.0
            signs[2 * site + 2 :] = -1.0
        elif label == "Y":
            signs[2 * site] = -1.0
            signs[2 * site + 2 :] = -1.0
        else:
            raise ValueError(f"unknown Pauli {label!r}")
        self.gamma *= np.outer(signs, signs)

    # -------------------------------------------------------------- dissipation

    def reset(self, site: int, target: int) -> None:
        """Fermionic mode reset: decouple the site and re-init it in |target>.

        This replaces the site's fermion mode, zeroing all covariance rows
        through it.  It coincides with the hardware qubit-reset channel
        whenever no Jordan-Wigner string of a correlated observable crosses
        the site — in particular at the first and last register positions,
        which is where every two-engine configuration places its reset
        qubits.  For interior sites the qubit channel additionally twists
        across-site correlations by the site's parity; protocols that reset
        interior auxiliaries are simulated here in the mode-reset sense.
        """
        j = site
        g = self.gamma
        g[2 * j : 2 * j + 2, :] = 0.0
        g[:, 2 * j : 2 * j + 2] = 0.0
        s = 1.0 if target == 0 else -1.0
        g[2 * j, 2 * j + 1] = s
        g[2 * j + 1, 2 * j] = -s

    def dephase_trajectory(
        self, rates: Sequence[float], rng: np.random.Generator
    ) -> None:
        """Stochastic dephasing: site j suffers a Z flip w.p. (1 - e^{-rate_j})/2."""
        signs = np.ones(2 * self.n)
        for j, r in enumerate(rates):
            if r > 0.0 and rng.random() < 0.5 * (1.0 - np.exp(-r)):
                signs[2 * j] = signs[2 * j + 1] = -1.0
        if np.any(signs < 0):
            self.gamma *= np.outer(signs, signs)

    def dephase_mean(self, rates: Sequence[float]) -> None:
        """Exact dephasing channel on the trajectory-averaged covariance matrix.

        Entries coupling distinct sites damp by e^{-rate_a} e^{-rate_b}; the
        on-site 2x2 blocks are untouched.
        """
        f = np.repeat(np.exp(-np.asarray(rates, dtype=float)), 2)
        before = [
            (self.gamma[2 * j, 2 * j + 1]) for j in range(self.n)
        ]
        self.gamma *= np.outer(f, f)
        for j, v in enumerate(before):
            self.gamma[2 * j, 2 * j + 1] = v
            self.gamma[2 * j + 1, 2 * j] = -v

    def _pair_correction(self, site: int) -> np.ndarray:
        """Wick correction K from the site's covariance rows.

        K[m][n] = (gamma[x][m] gamma[y][n] - gamma[y][m] gamma[x][n]) / 2 with
        (x, y) the site's Majorana pair; every conditional update below adds a
        multiple of K to the remaining entries.
        """
        gx = self.gamma[2 * site, :]
        gy = self.gamma[2 * site + 1, :]
        return 0.5 * (np.outer(gx, gy) - np.outer(gy, gx))

    def _decouple_site(self, site: int, z: float) -> None:
        x, y = 2 * site, 2 * site + 1
        self.gamma[x:y + 1, :] = 0.0
        self.gamma[:, x:y + 1] = 0.0
        self.gamma[x, y] = z
        self.gamma[y, x] = -z

    def measure_qubit(self, site: int, rng: np.random.Generator) -> int:
        """Projective Z measurement of one site; returns the sampled bit.

        Outcome 0 is the Z = +1 state (occupied fermion level), sampled with
        probability (1 + <Z_site>)/2.  The covariance matrix collapses to the
        exact conditional state: the remaining entries gain the Wick
        correction -s K / p_s and the site decouples into a pure block.
        """
        x, y = 2 * site, 2 * site + 1
        z = float(np.clip(self.gamma[x, y], -1.0, 1.0))
        s = 1.0 if rng.random() < 0.5 * (1.0 + z) else -1.0
        p = 0.5 * (1.0 + s * z)
        self.gamma += (-s / p) * self._pair_correction(site)
        self._decouple_site(site, s)
        return 0 if s > 0 else 1

    def reset_measure(
        self, site: int, target: int, rng: np.random.Generator
    ) -> None:
        """Hardware qubit reset, unraveled: measure Z, then flip if needed.

        Averaged over outcomes this reproduces the two-Kraus reset channel of
        the hardware exactly, including the parity twist that the plain mode
        ``reset`` misses on interior sites.
        """
        if self.measure_qubit(site, rng) != target:
            self.apply_pauli_gate("X", site)

    def decay_trajectory(
        self, rates: Sequence[float], rng: np.random.Generator
    ) -> None:
        """Stochastic amplitude decay toward the Z = +1 state of each site.

        Unravels the qubit decay channel (excited population damped by
        e^{-rate}) into two pure-state branches per site:

        * jump, w.p. (1 - e^{-rate}) P(excited): the site's level is filled,
          the rest gains +K / P(excited), and the Jordan-Wigner string of the
          local jump operator flips the sign of every earlier site's entries;
        * no jump: the weak-measurement back-action nudges the state toward
          the decayed branch; remaining entries gain (e^{-rate} - 1) K / p0,
          rows through the site damp by e^{-rate/2} / p0, and <Z_site> moves
          to (p_g - e^{-rate} p_e) / p0 with p0 the branch probability.

        Both branches map Gaussian states to Gaussian states exactly, so the
        trajectory average reproduces the channel's one-body observables
        without any weak-noise approximation.
        """
        g = self.gamma
        for j, rate in enumerate(rates):
            if rate <= 0.0:
                continue
            x, y = 2 * j, 2 * j + 1
            z = float(np.clip(g[x, y], -1.0, 1.0))
            q = 0.5 * (1.0 + z)          # occupied (ground-state) weight
            c2 = float(np.exp(-rate))
            p_jump = (1.0 - c2) * (1.0 - q)
            if rng.random() < p_jump:
                g += self._pair_correction(j) / (1.0 - q)
                self._decouple_site(j, 1.0)
                if j > 0:
                    g[: 2 * j, :] *= -1.0
                    g[:, : 2 * j] *= -1.0
            else:
                p0 = q + c2 * (1.0 - q)
                gx, gy = g[x, :].copy(), g[y, :].copy()
                g += ((c2 - 1.0) / p0) * (0.5 * (np.outer(gx, gy) - np.outer(gy, gx)))
                scale = np.sqrt(c2) / p0
                g[x, :] = scale * gx
                g[y, :] = scale * gy
                g[:, x] = -g[x, :]
                g[:, y] = -g[y, :]
                z_new = (q - c2 * (1.0 - q)) / p0
                g[x, y] = z_new
                g[y, x] = -z_new
                g[x, x] = g[y, y] = 0.0
        self.gamma = 0.5 * (self.gamma - self.gamma.T)

    # -------------------------------------------------------------- observables

    def expect_z(self, site: int) -> float:
        return float(self.gamma[2 * site, 2 * site + 1])

    def string_expectation(self, ops: str, positions: Sequence[int]) -> float:
        """<P> for single-Z, Z-pair, or two-endpoint X/Y strings with Z interior."""
        g = self.gamma
        nontriv = [(c, q) for c, q in zip(ops, positions) if c != "I"]
        labels = "".join(c for c, _ in nontriv)
        qs = [q for _, q in nontriv]
        if labels == "Z":
            return float(g[2 * qs[0], 2 * qs[0] + 1])
        if labels == "ZZ":
            j, k = qs
            i0, i1, i2, i3 = 2 * j, 2 * j + 1, 2 * k, 2 * k + 1
            return float(
                g[i0, i1] * g[i2, i3] - g[i0, i2] * g[i1, i3] + g[i0, i3] * g[i1, i2]
            )
        u, v = qs[0], qs[-1]
        _check_string_interior(labels, qs)
        ends = labels[0] + labels[-1]
        if ends == "XX":
            return float(g[2 * u + 1, 2 * v])
        if ends == "YY":
            return float(-g[2 * u, 2 * v + 1])
        if ends == "XY":
            return float(g[2 * u + 1, 2 * v + 1])
        if ends == "YX":
            return float(-g[2 * u, 2 * v])
        raise ValueError(f"unsupported string {ops!r}")

    def gamma_sub(self, sites: Sequence[int]) -> np.ndarray:
        """Covariance sub-block of a subset of sites (their reduced state)."""
        idx = np.array([m for j in sites for m in (2 * j, 2 * j + 1)])
        return self.gamma[np.ix_(idx, idx)]

    def entanglement_entropy(self, sites: Sequence[int]) -> float:
        """Von Neumann entropy (bits) of the reduced state on ``sites``."""
        nu = antisymmetric_block_spectrum(self.gamma_sub(sites))
        nu = np.clip(nu, 0.0, 1.0)
        return float(np.sum(binary_entropy((1.0 + nu) / 2.0)))

    def purity_defect(self) -> float:
        """|| gamma gamma^T - 1 ||_max; zero for pure states."""
        g = self.gamma
        return float(np.max(np.abs(g @ g.T - np.eye(2 * self.n))))

    def parity(self) -> float:
        """<prod_j Z_j> = Pf(gamma)."""
        return pfaffian(self.gamma)


# ------------------------------------------------------------------ string compiler

def _check_string_interior(labels: str, qs: Sequence[int]) -> None:
    if len(labels) < 2:
        raise ValueError(f"unsupported string {labels!r}")
    if list(qs) != list(range(qs[0], qs[0] + len(qs))):
        raise ValueError("string sites must be contiguous")
    if any(c != "Z" for c in labels[1:-1]):
        raise ValueError(f"interior of {labels!r} must be Z")
    if labels[0] not in "XY" or labels[-1] not in "XY":
        raise ValueError(f"string endpoints of {labels!r} must be X or Y")


def _string_rotation(labels: str, qubits: Sequence[int], angle: float):
    """Map exp(-i angle/2 P) to a Majorana pair rotation (m, k, beta).

    P may be a single Z or a contiguous string with X/Y endpoints and Z
    interior; these are exactly the Jordan-Wigner-quadratic strings:

        Z_j           = -i a_{2j} a_{2j+1}
        X_u Z.. X_v   = -i a_{2u+1} a_{2v}
        Y_u Z.. Y_v   = +i a_{2u} a_{2v+1}
        X_u Z.. Y_v   = -i a_{2u+1} a_{2v+1}
        Y_u Z.. X_v   = +i a_{2u} a_{2v}

    and exp(-i(angle/2)(-i a a)) = exp(-(angle/2) a a), so the sign of beta
    follows the i-factor.
    """
    nontriv = [(c, q) for c, q in zip(labels, qubits) if c != "I"]
    lab = "".join(c for c, _ in nontriv)
    qs = [q for _, q in nontriv]
    if lab == "Z":
        p = qs[0]
        return 2 * p, 2 * p + 1, angle
    _check_string_interior(lab, qs)
    u, v = qs[0], qs[-1]
    ends = lab[0] + lab[-1]
    if ends == "XX":
        return 2 * u + 1, 2 * v, angle
    if ends == "YY":
        return 2 * u, 2 * v + 1, -angle
    if ends == "XY":
        return 2 * u + 1, 2 * v + 1, angle
    if ends == "YX":
        return 2 * u, 2 * v, -angle
    raise ValueError(f"unsupported string {lab!r}")


# ------------------------------------------------------------------ rotation builder

class RotationBuilder:
    """Accumulates the SO(2n) matrix of a matchgate gate sequence.

    Presents the same unitary-gate interface as :class:`GaussianState` but
    tracks M <- R_gate M, so after running a cycle's gates ``matrix`` is the
    one-cycle Majorana rotation R with gamma -> R gamma R^T.
    """

    def __init__(self, n: int):
        self.n = n
        self.matrix = np.eye(2 * n)

    def rotate_pair(self, m: int, k: int, beta: float) -> None:
        c, s = np.cos(beta), np.sin(beta)
        M = self.matrix
        rm = c * M[m, :] - s * M[k, :]
        rk = s * M[m, :] + c * M[k, :]
        M[m, :], M[k, :] = rm, rk

    def apply_pauli_rotation(self, labels: str, qubits: Sequence[int], angle: float) -> None:
        m, k, beta = _string_rotation(labels, qubits, angle)
        self.rotate_pair(m, k, beta)

    def apply_pauli_gate(self, label: str, site: int) -> None:
        signs = np.ones(2 * self.n)
        if label == "Z":
            signs[2 * site] = signs[2 * site + 1] = -1.0
        elif label == "X":
            signs[2 * site + 1] = -1.0
            signs[2 * site + 2 :] = -1.0
        elif label == "Y":
            signs[2 * site] = -1.0
            signs[2 * site + 2 :] = -1.0
        else:
            raise ValueError(f"unknown Pauli {label!r}")
        self.matrix = signs[:, None] * self.matrix


# ------------------------------------------------------------------ pfaffian

def pfaffian(gamma: np.ndarray) -> float:
    """Pfaffian of a real antisymmetric matrix via the real Schur form."""
    T, Q = scipy.linalg.schur(gamma, output="real")
    n = gamma.shape[0]
    pf = 1.0
    i = 0
    while i < n:
        if i + 1 < n and abs(T[i + 1, i]) > 1e-12:
            pf *= T[i, i + 1]
            i += 2
        else:
            # zero eigenvalue block: Pfaffian vanishes
            if abs(T[i, i]) < 1e-10 and (i + 1 >= n or abs(T[i, i + 1]) < 1e-12):
                return 0.0
            i += 1
    return float(pf * np.linalg.det(Q))


# ------------------------------------------------------------------ fixed points

def affine_fixed_point(apply_map, dim: int, tol: float = 1e-13) -> np.ndarray:
    """Fixed point of an affine map on antisymmetric matrices.

    ``apply_map(gamma) -> gamma'`` must be affine.  Builds the linear part on
    the strictly-upper-triangular coordinates and solves (1 - L) x = b.
    """
    iu = np.triu_indices(dim, k=1)
    m = iu[0].size

    def to_vec(g):
        return g[iu]

    def from_vec(x):
        g = np.zeros((dim, dim))
        g[iu] = x
        return g - g.T

    b = to_vec(apply_map(np.zeros((dim, dim))))
    L = np.empty((m, m))
    for col in range(m):
        e = np.zeros(m)
        e[col] = 1.0
        L[:, col] = to_vec(apply_map(from_vec(e))) - b
    x = np.linalg.solve(np.eye(m) - L, b)
    g = from_vec(x)
    resid = np.max(np.abs(to_vec(apply_map(g)) - x))
    if resid > max(tol, 1e-9):
        raise RuntimeError(f"affine fixed point did not close (residual {resid:.2e})")
    return g
