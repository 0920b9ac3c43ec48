"""Boundary-driven Floquet XXZ transport on the dense engine.

A chain of ``N`` qubits (two of them auxiliaries) is driven by resetting the
auxiliaries every cycle and swapping them into the chain, producing a particle
current through a brickwork of fSim gates.  Register layout (0-based)::

    aux_L -- Q1 -- Q2 -- ... -- Q_{N-2} -- aux_R
      0      1     2             N-2        N-1

One driving cycle (time d -> d+1) applies, in order:

1. reset channel: aux_L -> |m1>, aux_R -> |m2>  (Kraus pair, unconditional)
2. ``U_B``:   iSWAP = fSim(pi/2, 0) on bonds (0,1) and (N-2, N-1)
3. ``U_odd``: fSim(theta, phi) on bonds (2,3), (4,5), ..., (N-4, N-3)
   -> occupations recorded at time d + 1/2
4. ``U_even``: fSim(theta, phi) on bonds (1,2), (3,4), ..., (N-3, N-2)
5. per-qubit decoherence channel (decay + dephasing), if enabled
   -> occupations recorded at time d + 1

Layer diagram for N = 10 (``x--x`` marks one two-qubit gate)::

    qubit:    0  1  2  3  4  5  6  7  8  9
    U_B:      x--x                 x--x
    U_odd:          x--x  x--x  x--x            } first half-cycle
    U_even:      x--x  x--x  x--x  x--x         } second half-cycle

The first half-cycle (U_B plus U_odd) touches every one of the N qubits
exactly once; the second (U_even) touches every system qubit exactly once.
Consequently each bond is active during exactly one half-cycle, and the
particle current through a bond equals the occupation change of the bond's
right-hand qubit over that half-cycle:

    bond (i, i+1), i even:  J_i(d) = P1_{i+1}(d + 1/2) - P1_{i+1}(d)
    bond (i, i+1), i odd:   J_i(d) = P1_{i+1}(d + 1)   - P1_{i+1}(d + 1/2)

except for the very last bond (into the right auxiliary), where the current
is read off the left qubit, J_{N-2}(d) = P1_{N-2}(d) - P1_{N-2}(d + 1/2),
because the auxiliary's occupation also jumps at the reset.  Bond 0 (left
auxiliary into Q1) is the pumping current.  With hopping angle
``theta = 0`` the chain gates cannot move particles, so interior system
qubits stay empty; the boundary sites still exchange one particle with the
auxiliaries through the fixed-angle boundary swaps.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .cooling import NoiseRates
from .dense import DenseState, fsim

__all__ = [
    "CircuitConstructionError",
    "SamplingError",
    "FitDomainError",
    "NotConvergedWarning",
    "XXZConfig",
    "TransportSeries",
    "NESSSummary",
    "brickwork_layers",
    "step",
    "run_transport",
    "measure_transport",
    "fit_exponent",
    "ness_summary",
]


class CircuitConstructionError(ValueError):
    """Brickwork layer indices fall outside the register or overlap."""


class SamplingError(ValueError):
    """Observable series is missing required half-cycle snapshots."""


class FitDomainError(ValueError):
    """Power-law fit window contains nonpositive values."""


class NotConvergedWarning(UserWarning):
    """Steady-state summary requested before the current has saturated."""


# ------------------------------------------------------------------ config

@dataclass(frozen=True)
class XXZConfig:
    """Parameters of one boundary-driven transport run.

    ``N`` counts all qubits including the two auxiliaries, so the system
    chain has ``N - 2`` sites.  ``theta`` and ``phi`` are the fSim angles of
    the chain gates (anisotropy ``delta = phi / (2 theta)``); the boundary
    swaps are full iSWAPs with a fixed pi/2 angle.  ``m1`` / ``m2`` are the
    reset targets of the left / right auxiliary; particle pumping needs
    ``m1 != m2`` (equal targets give a trivially balanced drive).
    """

    N: int = 10
    theta: float = np.pi / 4
    phi: float = np.pi / 2
    m1: int = 1
    m2: int = 0
    cycles: int = 200
    noise: NoiseRates = field(default_factory=NoiseRates)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.N < 4:
            raise ValueError("need at least 4 qubits (2 system + 2 auxiliary)")
        if self.N % 2 != 0:
            raise CircuitConstructionError(
                "brickwork layer pair covers every qubit exactly once only "
                "for an even total qubit count"
            )
        if self.m1 not in (0, 1) or self.m2 not in (0, 1):
            raise ValueError("reset targets must be 0 or 1")
        if self.cycles < 1:
            raise ValueError("cycles must be positive")

    @property
    def n_system(self) -> int:
        return self.N - 2

    @property
    def delta(self) -> float:
        """Anisotropy phi / (2 theta) of the underlying XXZ model."""
        if self.theta == 0.0:
            return np.inf if self.phi > 0 else (-np.inf if self.phi < 0 else np.nan)
        return self.phi / (2.0 * self.theta)

    @property
    def system_qubits(self) -> range:
        return range(1, self.N - 1)

    @property
    def aux_left(self) -> int:
        return 0

    @property
    def aux_right(self) -> int:
        return self.N - 1


def brickwork_layers(N: int) -> tuple[list, list, list]:
    """Bond lists (boundary, odd-layer, even-layer) for an N-qubit register.

    Returns ``(boundary, odd, even)`` where ``boundary + odd`` is the first
    half-cycle layer (disjoint bonds covering all N qubits exactly once) and
    ``even`` is the second (covering the N-2 system qubits exactly once).
    """
    if N < 4 or N % 2 != 0:
        raise CircuitConstructionError("register must have an even size >= 4")
    boundary = [(0, 1), (N - 2, N - 1)]
    odd = [(i, i + 1) for i in range(2, N - 3, 2)]
    even = [(i, i + 1) for i in range(1, N - 2, 2)]
    first = boundary + odd
    touched = [q for b in first for q in b]
    if sorted(touched) != list(range(N)):
        raise CircuitConstructionError("first layer does not tile the register")
    touched = [q for b in even for q in b]
    if sorted(touched) != list(range(1, N - 1)):
        raise CircuitConstructionError("second layer does not tile the system")
    for i, j in boundary + odd + even:
        if not (0 <= i < j < N):
            raise CircuitConstructionError(f"bond ({i}, {j}) outside register")
    return boundary, odd, even


# ------------------------------------------------------------------ stepping

def step(
    state: DenseState,
    config: XXZConfig,
    rng: Optional[np.random.Generator] = None,
    *,
    reset: bool = True,
    noise: bool = True,
    mid_hook: Optional[Callable[[DenseState], None]] = None,
) -> DenseState:
    """Apply one full driving cycle to ``state`` in place (and return it).

    ``mid_hook`` is called between the two brickwork layers (the half-cycle
    observation point).  ``reset=False`` drops the auxiliary reset and
    ``noise=False`` the decoherence channel; both are used by conservation
    checks.
    """
    if state.n != config.N:
        raise ValueError(f"state has {state.n} qubits, config expects {config.N}")
    boundary, odd, even = brickwork_layers(config.N)
    if reset:
        state.reset(config.aux_left, config.m1, rng=rng)
        state.reset(config.aux_right, config.m2, rng=rng)
    swap = fsim(np.pi / 2.0, 0.0)
    for bond in boundary:
        state.apply_unitary(swap, bond)
    hop = fsim(config.theta, config.phi)
    for bond in odd:
        state.apply_unitary(hop, bond)
    if mid_hook is not None:
        mid_hook(state)
    for bond in even:
        state.apply_unitary(hop, bond)
    if noise and config.noise.any():
        state.apply_decoherence(
            range(config.N), config.noise.gamma_decay, config.noise.gamma_dephase, rng=rng
        )
    return state


def run_transport(
    config: XXZConfig,
    state: Optional[DenseState] = None,
    *,
    reset: bool = True,
    noise: bool = True,
) -> "TransportSeries":
    """Drive the chain for ``config.cycles`` cycles and collect occupations.

    The initial state defaults to all-|0> as a density matrix (the reset
    channel entangles branches, so trajectory vectors would need sampling).
    Occupations of every qubit are recorded at times 0, 1/2, 1, 3/2, ...,
    and turned into bond currents by :func:`measure_transport`.
    """
    if state is None:
        state = DenseState.product_state([0] * config.N, kind="rho")
    rng = np.random.default_rng(config.seed)
    snapshots = [[state.probability_one(q) for q in range(config.N)]]
    times = [0.0]

    def record_mid(s: DenseState, d: int = 0) -> None:
        snapshots.append([s.probability_one(q) for q in range(config.N)])

    for d in range(config.cycles):
        step(state, config, rng, reset=reset, noise=noise, mid_hook=record_mid)
        times.append(d + 0.5)
        snapshots.append([state.probability_one(q) for q in range(config.N)])
        times.append(d + 1.0)
    return measure_transport(np.array(times), np.array(snapshots), config, state=state)


# ------------------------------------------------------------------ series

@dataclass
class TransportSeries:
    """Occupation snapshots and derived bond currents of one run.

    ``times`` holds integer and half-integer cycle stamps; ``p1`` has one row
    per stamp and one column per qubit (auxiliaries included).  ``currents``
    has one row per full cycle and one column per bond; column ``b`` is the
    current through bond (b, b+1), positive when particles flow to higher
    indices.  Column 0 is the pumping current (left auxiliary into Q1).
    """

    config: XXZConfig
    times: np.ndarray
    p1: np.ndarray
    currents: np.ndarray
    final_state: Optional[DenseState] = None

    @property
    def cycles(self) -> int:
        return self.currents.shape[0]

    def p1_at(self, time: float) -> np.ndarray:
        idx = np.nonzero(np.isclose(self.times, time))[0]
        if idx.size == 0:
            raise SamplingError(f"no snapshot recorded at time {time}")
        return self.p1[idx[0]]

    def pumping_current(self) -> np.ndarray:
        """Current from the left auxiliary into the first system qubit."""
        return self.currents[:, 0]

    def total_particles(self) -> np.ndarray:
        """Sum of system-qubit occupations at integer times."""
        mask = np.isclose(self.times % 1.0, 0.0)
        return self.p1[mask][:, 1 : self.config.N - 1].sum(axis=1)

    def continuity_residual(self) -> float:
        """Max violation of the discrete continuity equation.

        For every interior qubit q and cycle d, the occupation change over
        the full cycle must equal inflow minus outflow through its two
        bonds: P1_q(d+1) - P1_q(d) = J_{q-1}(d) - J_q(d).  Holds exactly for
        the noiseless circuit because each qubit takes part in exactly one
        number-conserving gate per half-cycle.
        """
        mask = np.isclose(self.times % 1.0, 0.0)
        ints = self.p1[mask]
        resid = 0.0
        for q in range(1, self.config.N - 1):
            dp = ints[1:, q] - ints[:-1, q]
            flow = self.currents[:, q - 1] - self.currents[:, q]
            resid = max(resid, float(np.max(np.abs(dp - flow))))
        return resid


def measure_transport(
    times: np.ndarray,
    p1: np.ndarray,
    config: XXZConfig,
    state: Optional[DenseState] = None,
) -> TransportSeries:
    """Turn half-cycle occupation snapshots into per-bond currents.

    Expects stamps 0, 1/2, 1, ... as produced by :func:`run_transport`; a
    missing half-integer grid raises :class:`SamplingError`.  The parity
    rule (module docstring) assigns each bond the occupation change of its
    right-hand qubit over the half-cycle in which the bond's gate acts.
    """
    times = np.asarray(times, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    if p1.ndim != 2 or p1.shape[0] != times.size or p1.shape[1] != config.N:
        raise SamplingError("p1 must have one row per stamp, one column per qubit")
    if times.size < 3 or not np.allclose(np.diff(times), 0.5):
        raise SamplingError(
            "need snapshots on the half-integer grid 0, 1/2, 1, ... "
            "(integer and mid-cycle observations)"
        )
    if times.size % 2 == 0:
        raise SamplingError("series must end on an integer-cycle snapshot")
    lo, hi = float(p1.min()), float(p1.max())
    if lo < -1e-9 or hi > 1.0 + 1e-9:
        raise SamplingError(f"occupations outside [0, 1]: min {lo}, max {hi}")
    cycles = (times.size - 1) // 2
    currents = np.zeros((cycles, config.N - 1))
    last = config.N - 2
    for d in range(cycles):
        start, mid, end = 2 * d, 2 * d + 1, 2 * d + 2
        for b in range(config.N - 1):
            right = b + 1
            if b == last:
                # The right-hand qubit of the last bond is the reset
                # auxiliary, whose occupation also jumps at the reset; read
                # the outflow from the untouched left qubit instead.
                currents[d, b] = p1[start, b] - p1[mid, b]
            elif b % 2 == 0:  # boundary swap and U_odd act in the first half
                currents[d, b] = p1[mid, right] - p1[start, right]
            else:  # U_even acts in the second half
                currents[d, b] = p1[end, right] - p1[mid, right]
    return TransportSeries(config=config, times=times, p1=p1, currents=currents, final_state=state)


# ------------------------------------------------------------------ analysis

def fit_exponent(
    series: TransportSeries,
    window: tuple[float, float],
    bond: int = 0,
) -> tuple[float, float]:
    """Least-squares power-law exponent of a bond current, J(d) ~ d^a.

    Fits log J versus log d over cycles ``window[0] <= d <= window[1]``
    (J(d) is the current of cycle d -> d+1, labelled by its start time) and
    returns ``(a, stderr)`` with the standard error of the slope.  Raises
    :class:`FitDomainError` when the window contains nonpositive currents
    or nonpositive times, and degenerate windows (< 3 points).
    """
    lo, hi = window
    d = np.arange(series.cycles, dtype=float)
    mask = (d >= lo) & (d <= hi)
    d = d[mask]
    j = series.currents[mask, bond]
    if d.size < 3:
        raise FitDomainError("fit window must contain at least 3 cycles")
    if np.any(d <= 0.0):
        raise FitDomainError("fit window must start at cycle >= 1 (log of 0)")
    if np.any(j <= 0.0):
        raise FitDomainError("current is nonpositive inside the fit window")
    x, y = np.log(d), np.log(j)
    n = x.size
    xbar = x.mean()
    sxx = float(np.sum((x - xbar) ** 2))
    a = float(np.sum((x - xbar) * (y - y.mean())) / sxx)
    b0 = float(y.mean() - a * xbar)
    resid = y - (a * x + b0)
    s2 = float(np.sum(resid**2)) / max(n - 2, 1)
    stderr = float(np.sqrt(s2 / sxx))
    return a, stderr


@dataclass
class NESSSummary:
    """Steady-state characterisation over a tail window of cycles."""

    window: tuple[int, int]
    mean_bond_currents: np.ndarray
    pumping_current: float
    density_profile: np.ndarray  # mean P1 of the system qubits
    saturated: bool
    drift: float


def ness_summary(
    series: TransportSeries,
    tail_window: Optional[tuple[int, int]] = None,
) -> NESSSummary:
    """Average currents and density profile over a late-time window.

    Saturation is declared when the pumping current averaged over the second
    half of the window differs from the first half by less than 5% (relative
    to the window mean); otherwise a :class:`NotConvergedWarning` reports the
    drift and the summary is still returned with ``saturated=False``.  The
    default window is the last 20 cycles.
    """
    if tail_window is None:
        tail_window = (max(0, series.cycles - 20), series.cycles)
    lo, hi = int(tail_window[0]), int(tail_window[1])
    if not (0 <= lo < hi <= series.cycles):
        raise ValueError(
            f"tail window {tail_window} not inside simulated range "
            f"[0, {series.cycles}]"
        )
    pump = series.currents[lo:hi, 0]
    halves = np.array_split(pump, 2)
    mean = float(pump.mean())
    scale = max(abs(mean), 1e-12)
    drift = float(abs(halves[1].mean() - halves[0].mean()) / scale)
    saturated = drift < 0.05
    if not saturated:
        warnings.warn(
            f"pumping current has not saturated over cycles [{lo}, {hi}): "
            f"relative drift {drift:.3g} >= 0.05",
            NotConvergedWarning,
            stacklevel=2,
        )
    mask = np.isclose(series.times % 1.0, 0.0) & (series.times >= lo) & (series.times <= hi)
    profile = series.p1[mask][:, 1 : series.config.N - 1].mean(axis=0)
    return NESSSummary(
        window=(lo, hi),
        mean_bond_currents=series.currents[lo:hi].mean(axis=0),
        pumping_current=mean,
        density_profile=profile,
        saturated=saturated,
        drift=drift,
    )


def strong_driving_profile(n_system: int) -> np.ndarray:
    """Reference steady-state density profile (cos(pi (i-1)/(L-1)) + 1)/2.

    Closed-form strong-driving prediction for solvable boundaries at the
    isotropic point; used as a qualitative reference for the measured NESS
    profile shape.
    """
    i = np.arange(1, n_system + 1, dtype=float)
    return 0.5 * (np.cos(np.pi * (i - 1) / (n_system - 1)) + 1.0)
