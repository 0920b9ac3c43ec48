"""Free-fermion eigenmodes of the open-boundary Floquet Ising chain.

The one-cycle unitary U = (bond XX layer)(site Z layer) acts on Jordan-Wigner
Majoranas as U† a_k U = sum_l K_kl a_l with K in SO(2L).  Mode operators
eta = sum_m psi_m a_m that *annihilate* positive-quasienergy excitations
(U† eta U = e^{-i phi} eta) have coefficient vectors with K psi = e^{+i phi} psi
(K is orthogonal, so transposing flips the eigenvalue's sign of phi); the
conjugate vectors carry the creation operators.

Two constructions are combined:

* a real Schur decomposition of K — always exact, always yields L modes,
  including the boundary modes with complex quasimomentum;
* the analytic Bloch/standing-wave construction — a superposition of plane
  waves with quasimomenta ±q, where q solves a transcendental quantization
  condition; it decorates each mode with (q, mu, xi, delta) and the site-1
  weights f± = L |amp_1 ± i amp_2|^2 that drive the weak-coupling cooling
  rates.

The analytic amplitudes ``amp`` follow the opposite phase branch
(K amp = e^{-i phi} amp, i.e. amp ~ conj(psi) up to scale), which is the
branch the standing-wave literature writes down; both are stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg
import scipy.optimize

from .gaussian import RotationBuilder

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


# ------------------------------------------------------------------ bulk theory

def dispersion(q, g: float, J: float):
    """Quasienergy phi(q) in [0, pi], evaluated in a gap-stable form.

    Uses sin^2(phi/2) = sin^2(pi(J-g)/2) + sin(pi J) sin(pi g) cos^2(q/2),
    equivalent to cos(phi) = cos(pi J)cos(pi g) - sin(pi J)sin(pi g)cos(q) but
    exact at the critical gap closing (g = J, q = pi).
    """
    q = np.asarray(q, dtype=float)
    s2 = np.sin(np.pi * (J - g) / 2.0) ** 2 + (
        np.sin(np.pi * J) * np.sin(np.pi * g) * np.cos(q / 2.0) ** 2
    )
    s2 = np.clip(s2, 0.0, 1.0)
    return 2.0 * np.arcsin(np.sqrt(s2))


def transfer_matrix(L: int, g: float, J: float) -> np.ndarray:
    """One-cycle Majorana rotation K of the bare chain (no auxiliaries)."""
    builder = RotationBuilder(L)
    for p in range(L):
        builder.apply_pauli_rotation("Z", (p,), -np.pi * g)
    for j in range(L - 1):
        builder.apply_pauli_rotation("XX", (j, j + 1), np.pi * J)
    return builder.matrix


def bloch_matrix(q: float, g: float, J: float) -> np.ndarray:
    """2x2 momentum-space transfer matrix acting on (v_{2j-1}, v_{2j})."""
    cJ, sJ = np.cos(np.pi * J), np.sin(np.pi * J)
    cg, sg = np.cos(np.pi * g), np.sin(np.pi * g)
    em, ep = np.exp(-1j * q), np.exp(1j * q)
    return np.array(
        [
            [cJ * cg - sJ * sg * em, cJ * sg + sJ * cg * em],
            [-cJ * sg - sJ * cg * ep, cJ * cg - sJ * sg * ep],
        ],
        dtype=complex,
    )


def bloch_angles(q: float, g: float, J: float):
    """(mu, xi): Bloch-sphere angles with M(q) = exp(-i phi n.sigma),
    n = (sin 2mu cos xi, sin 2mu sin xi, cos 2mu)."""
    M = bloch_matrix(q, g, J)
    # M = cos(phi) 1 - i sin(phi) n.sigma  (det M = 1), so the components of
    # sin(phi) n are i tr(sigma_a M)/2.
    raw = np.array([1j * np.trace(s @ M) / 2.0 for s in (_SX, _SY, _SZ)])
    n = np.real(raw)
    norm = np.linalg.norm(n)
    if norm < 1e-300:
        raise ValueError("Bloch axis undefined at zero quasienergy")
    n = n / norm
    mu = 0.5 * np.arccos(np.clip(n[2], -1.0, 1.0))
    xi = float(np.arctan2(n[1], n[0]))
    return float(mu), xi


def chi_pair(q: float, g: float, J: float):
    """Eigenvectors chi^{+q}, chi^{-q} of the Bloch matrices, phase-locked.

    chi^{q} = (cos mu, e^{i xi} sin mu) is the e^{-i phi} eigenvector of M(q);
    chi^{-q} = (sin mu, -e^{-i xi} cos mu) is the matching convention for
    M(-q) (equivalently mu -> pi/2 - mu, xi -> pi - xi).
    """
    mu, xi = bloch_angles(q, g, J)
    chi_p = np.array([np.cos(mu), np.exp(1j * xi) * np.sin(mu)])
    chi_m = np.array([np.sin(mu), -np.exp(-1j * xi) * np.cos(mu)])
    return chi_p, chi_m, mu, xi


def boundary_phase(q: float, g: float, J: float) -> complex:
    """e^{i delta_q} fixing the left boundary condition of the standing wave.

    The first Majorana row of K is a'_1 = cos(pi g) a_1 + sin(pi g) a_2, so an
    eigenvector with K amp = e^{-i phi} amp must satisfy
    (e^{-i phi} - cos(pi g)) amp_1 = sin(pi g) amp_2; solving for the relative
    weight of the two plane-wave branches gives delta_q.
    """
    phi = float(dispersion(q, g, J))
    mu, xi = bloch_angles(q, g, J)
    A = np.exp(-1j * phi) - np.cos(np.pi * g)
    sg = np.sin(np.pi * g)
    num = -A * np.cos(mu) + np.exp(1j * xi) * sg * np.sin(mu)
    den = A * np.sin(mu) + sg * np.exp(-1j * xi) * np.cos(mu)
    return num / den


def quantization_mismatch(q: float, L: int, g: float, J: float) -> float:
    """Wrapped phase defect of the quasimomentum quantization condition.

    The last Majorana row of K is a'_2L = -sin(pi g) a_{2L-1} + cos(pi g) a_2L.
    Imposing it on the standing wave (whose left boundary fixes delta_q)
    collapses to e^{2iq(L-1)} = -e^{2i(delta_q - xi_q)}; roots in (0, pi) are
    the physical quasimomenta.
    """
    mu, xi = bloch_angles(q, g, J)
    ed = boundary_phase(q, g, J)
    lhs = np.exp(2j * q * (L - 1))
    rhs = -((ed * np.exp(-1j * xi)) ** 2)
    return float(np.angle(lhs / rhs))


def standing_wave(q: float, L: int, g: float, J: float) -> np.ndarray:
    """Standing-wave amplitudes amp (2L complex), K amp = e^{-i phi} amp."""
    chi_p, chi_m, _, _ = chi_pair(q, g, J)
    ed = boundary_phase(q, g, J)
    j = np.arange(L)
    wave_m = np.exp(-1j * q * j)
    wave_p = np.exp(1j * q * j)
    amp = np.empty(2 * L, dtype=complex)
    amp[0::2] = (ed * chi_m[0] * wave_m + chi_p[0] * wave_p) / np.sqrt(L)
    amp[1::2] = (ed * chi_m[1] * wave_m + chi_p[1] * wave_p) / np.sqrt(L)
    return amp


# ------------------------------------------------------------------ mode table

@dataclass
class Mode:
    phi: float
    psi: np.ndarray          # normalized annihilator coefficients, K psi = e^{+i phi} psi
    amp: np.ndarray          # standing-wave-scale amplitudes, K amp = e^{-i phi} amp
    residual: float
    q: float = np.nan        # quasimomentum (nan for boundary modes)
    delta: float = np.nan
    mu: float = np.nan
    xi: float = np.nan
    analytic: bool = False

    @property
    def f_plus(self) -> float:
        L = self.amp.size // 2
        return float(L * abs(self.amp[0] + 1j * self.amp[1]) ** 2)

    @property
    def f_minus(self) -> float:
        L = self.amp.size // 2
        return float(L * abs(self.amp[0] - 1j * self.amp[1]) ** 2)


@dataclass
class EigenmodeTable:
    L: int
    g: float
    J: float
    K: np.ndarray
    modes: list

    @property
    def phis(self) -> np.ndarray:
        return np.array([m.phi for m in self.modes])

    def occupations(self, gamma: np.ndarray) -> np.ndarray:
        """Quasiparticle numbers n_k = <eta_k† eta_k> = (1 + i psi† gamma psi)/2."""
        out = np.empty(len(self.modes))
        for i, m in enumerate(self.modes):
            out[i] = 0.5 * (1.0 + np.real(1j * (m.psi.conj() @ gamma @ m.psi)))
        return out

    def max_residual(self) -> float:
        return max(m.residual for m in self.modes)


def _schur_modes(K: np.ndarray):
    """(phi, psi, amp) triples from the real Schur form; exact and complete.

    For an orthogonal K the real Schur form is block diagonal: 2x2 rotation
    blocks [[c, -s], [s, c]] give modes with phi = atan2(|s|, c), and any ±1
    diagonal singletons (numerically unresolved boundary-mode splittings)
    are paired by sign into phi = 0 or pi modes.
    """
    T, Q = scipy.linalg.schur(K, output="real")
    n = K.shape[0]
    out = []
    singles = {1: [], -1: []}
    i = 0
    while i < n:
        if i + 1 < n and abs(T[i + 1, i]) > 1e-13:
            c, s = T[i, i], T[i + 1, i]
            u, w = Q[:, i], Q[:, i + 1]
            phi = float(np.arctan2(abs(s), c))
            if s < 0:
                w = -w  # orient the block so K(u+iw) = e^{-i phi}(u+iw)
            amp = u + 1j * w
            out.append((phi, np.conj(amp) / np.sqrt(2.0), amp))
            i += 2
        else:
            singles[1 if T[i, i] > 0 else -1].append(Q[:, i])
            i += 1
    for lam, cols in singles.items():
        if len(cols) % 2:
            raise RuntimeError("odd number of unpaired Schur vectors")
        for a in range(0, len(cols), 2):
            u, w = cols[a], cols[a + 1]
            phi = 0.0 if lam > 0 else float(np.pi)
            amp = u + 1j * w
            out.append((phi, np.conj(amp) / np.sqrt(2.0), amp))
    return out


def _analytic_roots(L: int, g: float, J: float, n_scan: Optional[int] = None):
    """Quasimomentum roots of the quantization condition in (0, pi)."""
    if n_scan is None:
        n_scan = max(4000, 120 * L)
    eps = 1e-7
    qs = np.linspace(eps, np.pi - eps, n_scan)
    w = np.array([quantization_mismatch(q, L, g, J) for q in qs])
    wu = np.unwrap(w)
    roots = []
    targets = np.arange(
        np.floor(wu.min() / (2 * np.pi)) - 1, np.ceil(wu.max() / (2 * np.pi)) + 2
    ) * (2 * np.pi)
    for t in targets:
        crossings = np.nonzero((wu[:-1] - t) * (wu[1:] - t) < 0)[0]
        for idx in crossings:
            qa, qb = qs[idx], qs[idx + 1]
            offset = wu[idx] - w[idx]

            def f(q):
                val = quantization_mismatch(q, L, g, J) + offset - t
                return (val + np.pi) % (2 * np.pi) - np.pi

            try:
                root = scipy.optimize.brentq(f, qa, qb, xtol=1e-14)
            except ValueError:
                continue
            roots.append(root)
    roots = sorted(roots)
    dedup = []
    for r in roots:
        if not dedup or abs(r - dedup[-1]) > 1e-9:
            dedup.append(r)
    return dedup


def solve_modes(L: int, g: float, J: float, n_scan: Optional[int] = None) -> EigenmodeTable:
    """All L eigenmodes of the open chain, sorted by quasienergy.

    Schur modes anchor the table (orthonormal, machine-precision residuals);
    analytic standing waves matched by quasienergy supply (q, mu, xi, delta)
    and replace the amplitudes, so f± carry the standing-wave normalization.
    Boundary modes with complex quasimomentum simply stay numeric.
    """
    K = transfer_matrix(L, g, J)
    schur = _schur_modes(K)
    if len(schur) != L:
        raise RuntimeError(f"expected {L} modes, Schur gave {len(schur)}")
    modes = [
        Mode(phi=phi, psi=psi, amp=amp, residual=_residual(K, amp, phi))
        for phi, psi, amp in schur
    ]
    used = [False] * L
    for q in _analytic_roots(L, g, J, n_scan):
        phi = float(dispersion(q, g, J))
        amp = standing_wave(q, L, g, J)
        res = _residual(K, amp, phi)
        # attach to the closest unused Schur mode
        cand = [
            (abs(m.phi - phi), i)
            for i, m in enumerate(modes)
            if not used[i]
        ]
        if not cand:
            continue
        dist, i = min(cand)
        if dist > 1e-6 or res > 1e-6:
            continue
        used[i] = True
        mu, xi = bloch_angles(q, g, J)
        m = modes[i]
        m.q = float(q)
        m.phi = phi
        m.amp = amp
        m.psi = np.conj(amp) / np.linalg.norm(amp)
        m.residual = res
        m.delta = float(np.angle(boundary_phase(q, g, J)))
        m.mu = mu
        m.xi = xi
        m.analytic = True
    modes.sort(key=lambda m: m.phi)
    return EigenmodeTable(L=L, g=g, J=J, K=K, modes=modes)


def _residual(K: np.ndarray, amp: np.ndarray, phi: float) -> float:
    """||K amp - e^{-i phi} amp||_inf / ||amp||_inf."""
    num = np.max(np.abs(K @ amp - np.exp(-1j * phi) * amp))
    return float(num / np.max(np.abs(amp)))


def mode_weights(table: EigenmodeTable):
    """Site-1 coupling weights (f_plus, f_minus) for every mode."""
    fp = np.array([m.f_plus for m in table.modes])
    fm = np.array([m.f_minus for m in table.modes])
    return fp, fm


def analytic_weights(mode: Mode):
    """Closed-form site-1 weights of a real-q standing wave.

    f± = 2 (1 ± sin(delta - xi)) (1 ∓ sin(2 mu) sin(xi)); follows from
    L |amp_1 ± i amp_2|^2 with the standing-wave amplitudes at site 1, and
    agrees with the amplitude-based f± to machine precision (used as a
    consistency check on the whole construction).
    """
    if not mode.analytic:
        raise ValueError("analytic weights require a real-q standing wave")
    a = np.sin(mode.delta - mode.xi)
    b = np.sin(2.0 * mode.mu) * np.sin(mode.xi)
    return 2.0 * (1.0 + a) * (1.0 - b), 2.0 * (1.0 - a) * (1.0 + b)


def validate_table(table: EigenmodeTable) -> dict:
    """Residuals and completeness diagnostics for a mode table."""
    V = np.vstack(
        [np.array([m.psi for m in table.modes]),
         np.array([m.psi.conj() for m in table.modes])]
    )
    gram = V @ V.conj().T
    ortho = float(np.max(np.abs(gram - np.eye(2 * table.L))))
    return {
        "max_residual": table.max_residual(),
        "orthonormality": ortho,
        "n_modes": len(table.modes),
        "n_analytic": sum(m.analytic for m in table.modes),
    }
