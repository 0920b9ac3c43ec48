"""Unitary ladder circuit preparing the cycle vacuum, vs. dissipative cooling.

The pure Gaussian state annihilated by every cycle eigenmode can be prepared
directly from a product state by a ladder of nearest-neighbour matchgates.
The compiler performs Givens elimination on the vacuum covariance matrix with
rotations in adjacent Majorana planes only: on-site planes are Z rotations and
cross-site planes are XX rotations, and consecutive pairs of those fuse into
L(L-1)/2 two-angle bond gates.  The gates are then pipelined into parallel
layers (time steps in which no two gates share a qubit), giving the usual
light-cone arrangement of depth 2L-3.  A single bit flip on the last site is
prepended when the parity of the target state requires it (the orientation
invariant of the covariance matrix is preserved by rotations, so no sequence
of them can supply the flip).

For the noisy-hardware comparison, decoherence strength tracks elapsed
circuit time: one dose per parallel layer of the ladder, one dose per cycle
of the dissipative protocol.  Vacuum fidelities are read from quasiparticle
occupations, raw and after one-body purification.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cooling import (
    CoolingConfig,
    NoiseRates,
    run_cooling_gaussian,
    steady_state_gaussian,
)
from .dense import DenseState
from .eigenmodes import EigenmodeTable, solve_modes
from .gaussian import GaussianState
from .rdm import (
    OneBodyRDM,
    measure_1rdm,
    purify,
    string_isolated_covariance,
    to_eigenbasis,
    vacuum_covariance,
)

__all__ = [
    "PrepGate",
    "PrepPlan",
    "CompilationError",
    "compile_prep",
    "execute_prep",
    "comparison_point",
    "run_comparison",
]


class CompilationError(RuntimeError):
    """Raised when the compiled ladder fails to reproduce the target state."""


@dataclass(frozen=True)
class PrepGate:
    """Two-angle matchgate on the adjacent site pair (site, site + 1).

    Applied as the XX rotation exp(-i theta/2 X_s X_{s+1}) followed by the
    Z rotation exp(-i phi/2 Z_{s+1}).
    """

    n: int
    site: int
    theta: float
    phi: float


@dataclass
class PrepPlan:
    """Compiled preparation ladder for one eigenmode table.

    ``gates`` lists the bond gates in execution order; ``layers`` gives the
    gate-index boundaries of the parallel layers (gates between consecutive
    boundaries act on pairwise-disjoint qubits and run as one time step;
    noise is inserted after each layer); ``parity_flip`` asks for an X gate
    on the last site before the ladder; ``residual`` is the worst
    covariance-matrix deviation of the noiseless compiled circuit from the
    target.
    """

    L: int
    gates: List[PrepGate]
    layers: List[int] = field(default_factory=list)
    parity_flip: bool = False
    residual: float = 0.0

    @property
    def gate_count(self) -> int:
        return len(self.gates)


def _elimination_rotations(gamma: np.ndarray) -> Tuple[list, bool]:
    """Reduce an orthogonal antisymmetric gamma to the product-state form.

    Returns the (plane, angle) list that maps ``gamma`` to block-diagonal
    +1 blocks (last block carrying the parity sign) and the parity flag.
    Planes are adjacent: rotation (m, beta) mixes Majorana coordinates m-1, m
    as produced by exp(-(beta/2) a_{m-1} a_m).
    """
    g = gamma.copy()
    d = g.shape[0]
    L = d // 2
    rots: list = []
    for j in range(L - 1):
        r = 2 * j
        for m in range(d - 1, r + 1, -1):
            beta = float(np.arctan2(-g[r, m], g[r, m - 1]))
            c, s = np.cos(beta), np.sin(beta)
            rows = np.array([m - 1, m])
            block = np.array([[c, -s], [s, c]])
            g[rows, :] = block @ g[rows, :]
            g[:, rows] = g[:, rows] @ block.T
            rots.append((m, beta))
    parity_flip = g[d - 2, d - 1] < 0.0
    return rots, parity_flip


def compile_prep(table: EigenmodeTable, tol: float = 1e-8) -> PrepPlan:
    """Compile the ladder that prepares the vacuum of a mode table.

    Executing the plan on the all-|0> product state in a noiseless engine
    yields a state whose one-body reduced density matrix equals the vacuum
    projector; the compiled residual is verified against ``tol``.
    """
    target = vacuum_covariance(table)
    L = target.shape[0] // 2
    rots, parity_flip = _elimination_rotations(target)
    # Execution order inverts the elimination: reversed rotations, negated
    # angles.  Adjacent (XX, Z) rotations fuse into one bond gate.
    exec_rots = [(m, -beta) for (m, beta) in reversed(rots)]
    raw: List[Tuple[int, float, float]] = []
    i = 0
    while i < len(exec_rots):
        m_xx, theta = exec_rots[i]
        m_z, phi = exec_rots[i + 1]
        if m_xx % 2 or m_z % 2 == 0 or m_z != m_xx + 1:
            raise CompilationError("elimination order broke the bond-gate pairing")
        raw.append((m_xx // 2 - 1, theta, phi))
        i += 2
    # Pipeline into parallel layers: earliest time step after both qubits are
    # free.  Gates on disjoint bonds commute, so sorting by time step leaves
    # the circuit unchanged while gates that share a qubit keep their order.
    busy = [0] * L
    steps = []
    for site, _, _ in raw:
        t = max(busy[site], busy[site + 1]) + 1
        busy[site] = busy[site + 1] = t
        steps.append(t)
    order = sorted(range(len(raw)), key=lambda k: (steps[k], raw[k][0]))
    gates: List[PrepGate] = []
    layers: List[int] = []
    prev_step = 0
    for k in order:
        site, theta, phi = raw[k]
        if steps[k] != prev_step:
            layers.append(len(gates))
            prev_step = steps[k]
        gates.append(PrepGate(n=len(gates) + 1, site=site, theta=theta, phi=phi))
    expected = L * (L - 1) // 2
    if len(gates) != expected or len(layers) != max(2 * L - 3, 0):
        raise CompilationError(
            f"got {len(gates)} gates in {len(layers)} layers, expected {expected}"
        )
    plan = PrepPlan(L=L, gates=gates, layers=layers, parity_flip=parity_flip)
    check = GaussianState.product_state([0] * L)
    execute_prep(plan, check)
    plan.residual = float(np.max(np.abs(check.gamma - target)))
    if plan.residual > tol:
        raise CompilationError(f"compiled ladder residual {plan.residual:.2e} > {tol:g}")
    return plan


def _layer_slices(plan: PrepPlan) -> List[slice]:
    bounds = list(plan.layers) + [len(plan.gates)]
    return [slice(bounds[i], bounds[i + 1]) for i in range(len(plan.layers))]


def execute_prep(
    plan: PrepPlan,
    state,
    noise: Optional[NoiseRates] = None,
    rng: Optional[np.random.Generator] = None,
    trajectory: bool = False,
) -> None:
    """Run the ladder on a state of exactly plan.L sites (either engine).

    With ``noise`` given, decoherence acts on every site after each layer.
    The covariance engine samples decay jumps and Z flips when ``trajectory``
    and ``rng`` are set; without ``trajectory`` it applies the exact mean
    dephasing channel and rejects decay (the averaged decay channel is not
    Gaussian).  The dense engine applies the full decay + dephasing channel.
    """
    n = state.n
    if n != plan.L:
        raise ValueError(f"plan is for {plan.L} sites, state has {n}")
    gaussian = isinstance(state, GaussianState)
    if plan.parity_flip:
        if gaussian:
            state.apply_pauli_gate("X", n - 1)
        else:
            state.apply_pauli_string("X", [n - 1])
    for sl in _layer_slices(plan):
        for gate in plan.gates[sl]:
            pair = (gate.site, gate.site + 1)
            state.apply_pauli_rotation("XX", pair, gate.theta)
            state.apply_pauli_rotation("Z", (gate.site + 1,), gate.phi)
        if noise is not None and noise.any():
            if gaussian:
                if trajectory:
                    if rng is None:
                        raise ValueError("trajectory noise needs an rng")
                    if noise.gamma_decay > 0.0:
                        state.decay_trajectory([noise.gamma_decay] * n, rng)
                    if noise.gamma_dephase > 0.0:
                        state.dephase_trajectory([noise.gamma_dephase] * n, rng)
                elif noise.gamma_decay > 0.0:
                    raise ValueError(
                        "decay noise requires trajectory sampling on this engine"
                    )
                else:
                    state.dephase_mean([noise.gamma_dephase] * n)
            else:
                state.apply_decoherence(
                    range(n), noise.gamma_decay, noise.gamma_dephase,
                    rng=rng if trajectory else None,
                )


def comparison_point(
    L: int,
    noise: NoiseRates,
    g: float = 0.2,
    J: float = 0.2,
    theta: float = 0.11 * np.pi,
    h: float = 1.65,
    reset_period: int = 4,
) -> dict:
    """Fidelity comparison at one size: dissipative steady state vs. ladder.

    Both arms run on the covariance engine with the dephasing component of
    ``noise`` (decay is not a Gaussian channel; dense-engine cross-checks at
    small sizes cover it in the tests).  Returns raw and purified vacuum
    fidelities along with the per-mode occupations behind them.
    """
    table = solve_modes(L, g, J)
    dephasing = NoiseRates(gamma_decay=0.0, gamma_dephase=noise.gamma_dephase)

    cfg = CoolingConfig(
        L=L, g=g, J=J, theta=theta, h=h, reset_period=reset_period, noise=dephasing
    )
    layout = cfg.layout()
    steady = steady_state_gaussian(cfg)
    rdm_d = measure_1rdm(steady, layout.system)

    ladder = GaussianState.product_state([0] * L)
    plan = compile_prep(table)
    execute_prep(plan, ladder, noise=dephasing)
    rdm_u = measure_1rdm(ladder)

    row = {"L": L, "gates": plan.gate_count}
    _add_fidelity_columns(row, table, rdm_d, rdm_u)
    row["phis"] = table.phis
    return row


def _add_fidelity_columns(row, table, rdm_d, rdm_u) -> None:
    for tag, rdm in (("diss", rdm_d), ("unit", rdm_u)):
        occ_raw = to_eigenbasis(rdm, table).occupations()
        occ_pure = to_eigenbasis(purify(rdm), table).occupations()
        row[f"occ_{tag}"] = occ_raw
        row[f"occ_{tag}_pure"] = occ_pure
        row[f"fid_{tag}"] = float(np.prod(1.0 - np.clip(occ_raw, 0.0, 1.0)))
        row[f"fid_{tag}_pure"] = float(np.prod(1.0 - np.clip(occ_pure, 0.0, 1.0)))


def trajectory_comparison_point(
    L: int,
    noise: NoiseRates,
    trajectories: int = 200,
    cycles: int = 150,
    seed: int = 0,
    g: float = 0.2,
    J: float = 0.2,
    theta: float = 0.11 * np.pi,
    h: float = 1.65,
    reset_period: int = 4,
) -> dict:
    """Noisy comparison at one size with full (decay + dephasing) noise.

    Both arms run covariance-engine quantum trajectories, so amplitude decay
    and the hardware qubit-reset channel are modelled exactly on average.
    The dissipative arm runs the cooling circuit for ``cycles`` cycles with
    noise after every cycle; the unitary arm runs the compiled ladder with
    noise after every layer.  Fidelities come from the trajectory-averaged
    covariance matrix of the system register measured in its own fermion
    algebra: parity strings skip the auxiliary positions, the way a hardware
    system register is read out, so auxiliary noise only enters through the
    gates and not through the measurement strings.
    """
    table = solve_modes(L, g, J)
    plan = compile_prep(table)
    base = CoolingConfig(
        L=L, g=g, J=J, theta=theta, h=h, reset_period=reset_period,
        cycles=cycles, noise=noise,
    )
    layout = base.layout()

    gamma_d = np.zeros((2 * L, 2 * L))
    gamma_u = np.zeros((2 * L, 2 * L))
    for t in range(trajectories):
        cfg = replace(base, seed=seed + t)
        rec = run_cooling_gaussian(
            cfg, record_energy=False, noise_mode="trajectory", reset_mode="measure"
        )
        gamma_d += string_isolated_covariance(rec.final_state.gamma, layout.system)

        rng = np.random.default_rng((seed + t, 1))
        ladder = GaussianState.product_state([0] * L)
        execute_prep(plan, ladder, noise=noise, rng=rng, trajectory=True)
        gamma_u += ladder.gamma
    gamma_d /= trajectories
    gamma_u /= trajectories

    eye = np.eye(2 * L)
    rdm_d = OneBodyRDM((eye + 1j * gamma_d) / 2.0, basis="majorana")
    rdm_u = OneBodyRDM((eye + 1j * gamma_u) / 2.0, basis="majorana")
    row = {"L": L, "gates": plan.gate_count, "trajectories": trajectories,
           "cycles": cycles}
    _add_fidelity_columns(row, table, rdm_d, rdm_u)
    return row


def run_comparison(
    L_values: Sequence[int],
    noise: NoiseRates,
    g: float = 0.2,
    J: float = 0.2,
    theta: float = 0.11 * np.pi,
    h: float = 1.65,
    reset_period: int = 4,
) -> List[dict]:
    """Dissipative-vs-unitary comparison rows for a range of chain lengths."""
    return [
        comparison_point(L, noise, g=g, J=J, theta=theta, h=h, reset_period=reset_period)
        for L in L_values
    ]
