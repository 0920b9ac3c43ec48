"""One-body reduced density matrices: measurement, mode-basis transform, purification.

The one-body reduced density matrix (1RDM) of a fermionic state collects all
Majorana two-point functions, D[m][n] = <a_m a_n> / 2.  With the conventions of
:mod:`floqcool.gaussian` (gamma[m][n] = Im <a_m a_n>) this is

    D = (I + i gamma) / 2,

a Hermitian 2L x 2L matrix with trace L whose eigenvalues pair as (lambda,
1 - lambda) about 1/2.  Everything downstream — quasiparticle occupations,
purification, vacuum fidelities, string correlators, quadratic entanglement
entropies — is a function of this single matrix, which is why it can be
measured with only O(L^2) multiqubit observables.

Majorana indices are interleaved exactly as in the engines: register site j
(0-based) owns a_{2j} (the X-type string) and a_{2j+1} (the Y-type string).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg

from .dense import DenseState, measure_majorana_covariance
from .eigenmodes import EigenmodeTable
from .gaussian import GaussianState, antisymmetric_block_spectrum, binary_entropy

__all__ = [
    "OneBodyRDM",
    "measure_1rdm",
    "string_isolated_covariance",
    "vacuum_rdm",
    "vacuum_covariance",
    "to_eigenbasis",
    "purify",
    "vacuum_fidelity",
    "edge_mode_mask",
    "quantum_correlator",
    "correlator_matrix",
    "rdm_entropy",
]


@dataclass
class OneBodyRDM:
    """Hermitian matrix of Majorana two-point functions <a_m a_n>/2.

    ``basis`` is ``"majorana"`` (interleaved site order) or ``"eigenmode"``
    (row/column order eta_1..eta_L, eta^dag_1..eta^dag_L, so the lower-right
    block is F^{+-}[i][j] = <eta^dag_i eta_j> whose diagonal holds the
    quasiparticle occupations).  ``transform`` stores the unitary that carried
    a Majorana-basis matrix into the eigenmode basis, so the transformation
    can be undone without re-solving the modes.
    """

    matrix: np.ndarray
    basis: str = "majorana"
    transform: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix)
        d = self.matrix.shape[0]
        if self.matrix.ndim != 2 or self.matrix.shape[1] != d or d % 2:
            raise ValueError("1RDM must be a 2L x 2L matrix")
        if self.basis not in ("majorana", "eigenmode"):
            raise ValueError(f"unknown basis {self.basis!r}")

    @property
    def n_sites(self) -> int:
        return self.matrix.shape[0] // 2

    def gamma(self) -> np.ndarray:
        """Real antisymmetric covariance matrix, gamma = Im(2 D)."""
        if self.basis != "majorana":
            raise ValueError("covariance matrix is defined in the Majorana basis")
        g = 2.0 * np.imag(self.matrix)
        return 0.5 * (g - g.T)

    def block(self, which: str) -> np.ndarray:
        """Sub-block by Majorana parity: 'oo', 'oe', 'eo' or 'ee'.

        'o' selects the first (X-type) Majorana of every site, 'e' the second
        (Y-type) one.
        """
        if self.basis != "majorana":
            raise ValueError("parity blocks are defined in the Majorana basis")
        sel = {"o": slice(0, None, 2), "e": slice(1, None, 2)}
        try:
            r, c = sel[which[0]], sel[which[1]]
        except (KeyError, IndexError):
            raise ValueError("block must be one of 'oo', 'oe', 'eo', 'ee'") from None
        return self.matrix[r, c]

    def eigenvalues(self) -> np.ndarray:
        """Spectrum sorted descending; pairs as (lambda, 1 - lambda)."""
        return np.sort(np.linalg.eigvalsh(self.matrix))[::-1]

    def occupations(self) -> np.ndarray:
        """Quasiparticle occupations <eta^dag_i eta_i> (eigenmode basis only)."""
        if self.basis != "eigenmode":
            raise ValueError("occupations require the eigenmode basis")
        L = self.n_sites
        return np.real(np.diag(self.matrix)[L:]).copy()

    def mode_block(self, which: str) -> np.ndarray:
        """Eigenmode-basis block: '-+' <eta eta^dag>, '--' <eta eta>,
        '++' <eta^dag eta^dag>, '+-' <eta^dag eta>.

        Rows index the first operator, columns the second; a column in the
        first half of the matrix carries the conjugated mode vector and hence
        a creation operator, so the column slices are mirrored.
        """
        if self.basis != "eigenmode":
            raise ValueError("mode blocks require the eigenmode basis")
        L = self.n_sites
        rows = {"-": slice(0, L), "+": slice(L, 2 * L)}
        cols = {"+": slice(0, L), "-": slice(L, 2 * L)}
        try:
            r, c = rows[which[0]], cols[which[1]]
        except (KeyError, IndexError):
            raise ValueError("block must be one of '-+', '--', '++', '+-'") from None
        return self.matrix[r, c]


State = Union[GaussianState, DenseState]


def measure_1rdm(state: State, sites: Optional[Sequence[int]] = None) -> OneBodyRDM:
    """1RDM of a register (or of an ascending subset of its sites).

    Gaussian states already store the covariance matrix; dense states are
    measured through the Jordan-Wigner Pauli strings of each Majorana pair, so
    both engines produce the same matrix for the same circuit.
    """
    if isinstance(state, GaussianState):
        gamma = state.gamma if sites is None else state.gamma_sub(sites)
    elif isinstance(state, DenseState):
        gamma = measure_majorana_covariance(state, sites)
    else:
        raise TypeError(f"unsupported state type {type(state).__name__}")
    d = gamma.shape[0]
    return OneBodyRDM((np.eye(d) + 1j * gamma) / 2.0, basis="majorana")


def _pfaffian_inplace(a: np.ndarray) -> float:
    """Pfaffian of a small real antisymmetric matrix (Parlett-Reid, destroys a)."""
    n = a.shape[0]
    if n % 2:
        return 0.0
    pf = 1.0
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            pf = -pf
        if a[k + 1, k] == 0.0:
            return 0.0
        pf *= a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2:] / a[k, k + 1]
            col = a[k + 2:, k + 1]
            a[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return float(pf)


def string_isolated_covariance(gamma: np.ndarray, sites: Sequence[int]) -> np.ndarray:
    """Covariance matrix of the fermion algebra built on ``sites`` alone.

    The Majorana operators of the subregister are defined with Jordan-Wigner
    parity strings that run over the listed sites only, skipping everything in
    between — the natural operators when a subregister is measured as its own
    chain (e.g. a system register threaded through auxiliary positions).
    Relative to the full-register operators each pair picks up the Z parity of
    the skipped sites, so by Wick's theorem every entry is the Pfaffian of the
    corresponding sub-block of ``gamma``:

        gamma'[mu][nu] = Pf(gamma[S, S]),
        S = [p(mu)] + [2t, 2t+1 for skipped t between] + [p(nu)].

    Exact only for Wick states (pure Gaussian states, or mean states of
    Gaussian-preserving channels); average the result over trajectories
    otherwise.  With no skipped sites between any pair this reduces to the
    plain sub-block ``gamma[sites x sites]``.
    """
    keep = list(sites)
    if keep != sorted(keep) or len(set(keep)) != len(keep):
        raise ValueError("sites must be strictly ascending")
    n_all = gamma.shape[0] // 2
    if keep and not (0 <= keep[0] and keep[-1] < n_all):
        raise ValueError(f"sites out of range for a {n_all}-site register")
    skipped = sorted(set(range(n_all)) - set(keep))
    s = len(keep)
    out = np.zeros((2 * s, 2 * s))
    for j in range(s):
        u = keep[j]
        out[2 * j, 2 * j + 1] = gamma[2 * u, 2 * u + 1]
        out[2 * j + 1, 2 * j] = gamma[2 * u + 1, 2 * u]
        for l in range(j + 1, s):
            v = keep[l]
            between = [t for t in skipped if u < t < v]
            if not between:
                blk = gamma[np.ix_([2 * u, 2 * u + 1], [2 * v, 2 * v + 1])]
                out[2 * j: 2 * j + 2, 2 * l: 2 * l + 2] = blk
                out[2 * l: 2 * l + 2, 2 * j: 2 * j + 2] = -blk.T
                continue
            pairs = [p for t in between for p in (2 * t, 2 * t + 1)]
            for dm in (0, 1):
                for dn in (0, 1):
                    idx = [2 * u + dm] + pairs + [2 * v + dn]
                    val = _pfaffian_inplace(gamma[np.ix_(idx, idx)].copy())
                    out[2 * j + dm, 2 * l + dn] = val
                    out[2 * l + dn, 2 * j + dm] = -val
    return out


def _mode_unitary(table: EigenmodeTable) -> np.ndarray:
    """Unitary with rows (psi_1..psi_L, conj(psi_1)..conj(psi_L))."""
    Psi = np.array([m.psi for m in table.modes])
    return np.vstack([Psi, Psi.conj()])


def vacuum_rdm(table: EigenmodeTable) -> OneBodyRDM:
    """1RDM of the state annihilated by every mode of the table.

    In the eigenmode basis this is diag(I, 0); carried back to the Majorana
    basis it is the rank-L projector Psi^dag Psi built from the mode-vector
    rows, so it is idempotent and all occupations vanish exactly.
    """
    Psi = np.array([m.psi for m in table.modes])
    return OneBodyRDM(Psi.conj().T @ Psi, basis="majorana")


def vacuum_covariance(table: EigenmodeTable) -> np.ndarray:
    """Covariance matrix gamma of the mode vacuum (orthogonal, antisymmetric)."""
    return vacuum_rdm(table).gamma()


def to_eigenbasis(rdm: OneBodyRDM, table: EigenmodeTable) -> OneBodyRDM:
    """Rewrite the 1RDM in the quasiparticle basis of a mode table.

    With eta_i = (1/sqrt(2)) sum_m psi_{i,m} a_m the result is the block matrix
    [[<eta eta^dag>, <eta eta>], [<eta^dag eta^dag>, <eta^dag eta>]], so the
    diagonal of the lower-right block gives the occupations n_i in [0, 1].
    The transform is unitary and preserves the spectrum.
    """
    if rdm.basis != "majorana":
        raise ValueError("input must be in the Majorana basis")
    V = _mode_unitary(table)
    if V.shape[0] != rdm.matrix.shape[0]:
        raise ValueError(
            f"mode table is for {V.shape[0] // 2} sites, 1RDM has {rdm.n_sites}"
        )
    return OneBodyRDM(V @ rdm.matrix @ V.conj().T, basis="eigenmode", transform=V)


def _purify_gamma(gamma: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Snap every rotation parameter of the covariance matrix to +-1.

    Real-Schur decomposing the antisymmetric gamma gives 2x2 blocks
    [[0, nu], [-nu, 0]]; replacing nu by sign(nu) yields the orthogonal
    antisymmetric covariance of the closest pure Gaussian state, which is the
    top-half-eigenvector projector of the corresponding 1RDM.  Orientation of
    a (near-)zero block is kept as produced by the decomposition, which makes
    the tie-break deterministic.
    """
    T, Q = scipy.linalg.schur(gamma, output="real")
    T = 0.5 * (T - T.T)  # congruence by Q preserves antisymmetry; drop roundoff
    d = gamma.shape[0]
    nus = np.array([T[i, i + 1] for i in range(0, d, 2)])
    if np.min(np.abs(nus)) < tol:
        warnings.warn(
            "occupation spectrum is degenerate at the purification cut "
            "(a rotation parameter is within tolerance of zero); "
            "tie broken by decomposition orientation",
            RuntimeWarning,
            stacklevel=3,
        )
    B = np.zeros_like(gamma)
    for i, nu in enumerate(nus):
        s = 1.0 if nu >= 0 else -1.0
        B[2 * i, 2 * i + 1] = s
        B[2 * i + 1, 2 * i] = -s
    return Q @ B @ Q.T


def purify(rdm: OneBodyRDM) -> OneBodyRDM:
    """Project onto the L eigenvectors with the largest eigenvalues.

    The output is the 1RDM of a pure Gaussian state: idempotent (D^2 = D),
    trace L, and particle-hole symmetric by construction, because the
    projection is performed by snapping the covariance-matrix rotation
    parameters to +-1 rather than by truncating an eigendecomposition (the two
    agree whenever the spectrum is nondegenerate at the cut).  Input and
    output basis match; an eigenmode-basis input is carried back to the
    Majorana basis, purified there, and transformed again.
    """
    if rdm.basis == "eigenmode":
        if rdm.transform is None:
            raise ValueError("eigenmode-basis 1RDM lacks its transform")
        V = rdm.transform
        maj = OneBodyRDM(V.conj().T @ rdm.matrix @ V, basis="majorana")
        pure = purify(maj)
        return OneBodyRDM(V @ pure.matrix @ V.conj().T, basis="eigenmode", transform=V)
    gamma_pure = _purify_gamma(rdm.gamma())
    d = gamma_pure.shape[0]
    return OneBodyRDM((np.eye(d) + 1j * gamma_pure) / 2.0, basis="majorana")


def vacuum_fidelity(
    occupations: Sequence[float], exclude: Optional[Sequence[bool]] = None
) -> float:
    """prod_i (1 - n_i): probability that no quasiparticle is present.

    ``exclude`` is an optional boolean mask of modes to leave out of the
    product (e.g. boundary modes whose half filling is physical rather than a
    cooling failure).  Monotone nonincreasing in every occupation.
    """
    n = np.clip(np.asarray(occupations, dtype=float), 0.0, 1.0)
    if exclude is not None:
        mask = np.asarray(exclude, dtype=bool)
        if mask.shape != n.shape:
            raise ValueError("exclude mask must match occupations in length")
        n = n[~mask]
    return float(np.prod(1.0 - n))


def edge_mode_mask(
    table: EigenmodeTable, phi_threshold: Optional[float] = None
) -> np.ndarray:
    """Boolean mask of boundary-localized modes.

    By default a mode counts as a boundary mode when it has no real-momentum
    standing-wave representation (it was found only by the matrix
    decomposition, i.e. its momentum is complex and its weight is localized at
    the chain ends).  Passing ``phi_threshold`` instead selects modes with
    quasienergy below the threshold.
    """
    if phi_threshold is not None:
        return table.phis < phi_threshold
    return np.array([not m.analytic for m in table.modes], dtype=bool)


def quantum_correlator(rdm: OneBodyRDM, j: int, k: int) -> float:
    """String correlator <Y_j (prod_{j<m<k} Z_m) Y_k> from the 1RDM.

    Site-wise multiplication of the Jordan-Wigner strings gives
    a_{2j} a_{2k+1} = -i Y_j (prod Z) Y_k (0-based interleaved indices), so the
    correlator is a single Majorana two-point function:
    i <a_{2j} a_{2k+1}> = -gamma[2j][2k+1].  Validated against dense-engine
    Pauli-string evaluation in the tests.
    """
    L = rdm.n_sites
    if not (0 <= j < k < L):
        raise ValueError(f"need 0 <= j < k < L={L}, got j={j}, k={k}")
    return float(-2.0 * np.imag(rdm.matrix[2 * j, 2 * k + 1]))


def correlator_matrix(rdm: OneBodyRDM) -> np.ndarray:
    """Symmetric L x L table of the string correlator for every site pair."""
    gamma = rdm.gamma()
    L = rdm.n_sites
    C = np.zeros((L, L))
    for j in range(L):
        for k in range(j + 1, L):
            C[j, k] = C[k, j] = -gamma[2 * j, 2 * k + 1]
    return C


def rdm_entropy(rdm: OneBodyRDM, sites: Sequence[int]) -> float:
    """Entanglement entropy (bits) of a contiguous block, from the 1RDM alone.

    This is the von Neumann entropy of the Gaussian state with the same 1RDM:
    the sub-block covariance matrix has rotation parameters nu_l, and each
    fermionic level contributes H2((1 + nu_l)/2).  Zero for any cut of a pure
    product 1RDM; volume-law for a noisy steady state; area-law after
    purification away from the critical point.
    """
    sites = list(sites)
    if sites != list(range(min(sites), min(sites) + len(sites))):
        raise ValueError("subsystem must be a contiguous ascending site range")
    idx = [m for s in sites for m in (2 * s, 2 * s + 1)]
    gsub = rdm.gamma()[np.ix_(idx, idx)]
    nu = antisymmetric_block_spectrum(gsub)
    return float(np.sum(binary_entropy((1.0 + nu) / 2.0)))
