"""Weak-coupling (secular) theory of the dissipative cooling steady state.

One auxiliary level d, reset every M cycles to the *occupied* state (hardware
|0>), exchanges excitations with the chain through a hopping of amplitude
theta per cycle, while a phase gate advances the auxiliary by pi h per cycle.
Expanding to second order in theta and keeping only terms that survive the
coarse-grained (secular) limit yields a Lindblad equation that is diagonal in
the chain eigenmodes, with golden-rule rates involving the finite-time comb

    delta_M(x) = sin^2(M x / 2) / (2 pi M sin^2(x / 2)).

Because the auxiliary starts occupied, draining it *creates* a quasiparticle
when pi h matches +phi about the mode precession (resonance delta_M(phi - pi h))
and *annihilates* one when it matches -phi (resonance delta_M(phi + pi h)).
With the mode-table weights f± = L |amp_1 ± i amp_2|^2 (amp on the
e^{-i phi} branch) the per-reset-block rates are

    W_create(k)     = 2 pi M theta^2 (f-_k / L) delta_M(phi_k - pi h)
    W_annihilate(k) = 2 pi M theta^2 (f+_k / L) delta_M(phi_k + pi h)

and the steady-state occupation of mode k is the detailed-balance ratio

    n_k = W_create / (W_create + W_annihilate)
        = [1 + (f+_k / f-_k) delta_M(pi h + phi_k) / delta_M(pi h - phi_k)]^{-1}.

Cooling therefore peaks when pi h + phi = 2 pi at the top of the band
(h ~ 2 - (g + J) for small angles); these orientations are pinned by matching
the exact covariance-matrix steady state at theta/pi = 0.001 in the tests.
"""

from __future__ import annotations

import numpy as np

from .eigenmodes import EigenmodeTable, mode_weights


def delta_M(x, M: int):
    """Finite-time delta comb, 2pi-periodic; delta_M -> delta as M -> inf."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    half = 0.5 * np.mod(np.atleast_1d(x), 2.0 * np.pi)
    s = np.sin(half)
    near = np.abs(s) < 1e-9
    safe = np.where(near, 1.0, s)
    vals = np.sin(M * half) ** 2 / (2.0 * np.pi * M * safe**2)
    vals = np.where(near, M / (2.0 * np.pi), vals)
    return float(vals[0]) if scalar else vals


def principal_M(x, M: int):
    """P_M(1/x) = (1/M) sum_{m=1}^M sum_{l=1}^{m-1} sin(x l)."""
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x, dtype=float)
    for m in range(1, M + 1):
        for el in range(1, m):
            total = total + np.sin(x * el)
    return total / M


def rates(table: EigenmodeTable, h: float, theta: float, M: int):
    """(W_create, W_annihilate) per reset block for every mode."""
    fp, fm = mode_weights(table)
    phi = table.phis
    pref = 2.0 * np.pi * M * theta**2 / table.L
    w_create = pref * fm * delta_M(phi - np.pi * h, M)
    w_annihilate = pref * fp * delta_M(phi + np.pi * h, M)
    return w_create, w_annihilate


def occupations(table: EigenmodeTable, h: float, M: int) -> np.ndarray:
    """Steady-state quasiparticle numbers n_k (independent of theta)."""
    fp, fm = mode_weights(table)
    phi = table.phis
    up = fm * delta_M(phi - np.pi * h, M)
    down = fp * delta_M(phi + np.pi * h, M)
    with np.errstate(invalid="ignore"):
        n = up / (up + down)
    return np.where(up + down > 0.0, n, 0.5)


def lamb_shift(table: EigenmodeTable, h: float, theta: float, M: int):
    """Second-order quasienergy shifts Delta_k (and the scalar offset Delta_0).

    Delta_k = (M theta^2 / L) [f+_k P_M(1/(phi_k + pi h))
                               + f-_k P_M(1/(phi_k - pi h))],
    pairing each weight with the principal-value comb of its own channel.
    """
    fp, fm = mode_weights(table)
    phi = table.phis
    pref = M * theta**2 / table.L
    shifts = pref * (
        fp * principal_M(phi + np.pi * h, M) + fm * principal_M(phi - np.pi * h, M)
    )
    delta0 = float(pref * np.sum(fp * principal_M(phi + np.pi * h, M)))
    return shifts, delta0


def total_occupation(table: EigenmodeTable, h: float, M: int) -> float:
    return float(np.sum(occupations(table, h, M)))


def optimize_h(table: EigenmodeTable, M: int, grid=None):
    """h minimizing the steady-state total quasiparticle number.

    Coarse grid scan refined by golden-section search; returns (h_opt, N_opt).
    """
    import scipy.optimize

    if grid is None:
        grid = np.linspace(0.0, 2.0, 801)
    totals = np.array([total_occupation(table, h, M) for h in grid])
    i = int(np.argmin(totals))
    lo = grid[max(0, i - 2)]
    hi = grid[min(len(grid) - 1, i + 2)]
    res = scipy.optimize.minimize_scalar(
        lambda h: total_occupation(table, h, M), bounds=(lo, hi), method="bounded"
    )
    return float(res.x), float(res.fun)
