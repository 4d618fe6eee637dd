"""Scripted numerical experiments: spectra maps, dark-BIC evolution, decay
sweeps, wave-packet scattering, nonlinear stability, and multi-mode chains.

Every experiment consumes a LatticeConfig and returns plain result records;
CSV/JSON serialization lives in the scenario layer.  Dark-BIC initial states
are always taken from the full monodromy eigenvector, never from the reduced
chain, so the evolutions probe the exact dynamics.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .floquet import classified_spectrum, dark_mode
from .hfe import beta_root
from .integrator import (
    DEFAULT_STEPS_PER_PERIOD,
    StateVector,
    Trajectory,
    decay_probability,
    evolve,
)
from .lattice import (
    LatticeConfig,
    site_indices,
    with_drive,
    with_loss_strength,
    with_nonlinearity_strength,
)

__all__ = [
    "PacketSpec",
    "gaussian_packet",
    "ReflectivityResult",
    "reflectivity",
    "reflectivity_sweep",
    "IprMap",
    "ipr_map",
    "DecayPoint",
    "decay_sweep",
    "EvolutionReport",
    "dark_bic_evolution",
    "NonlinearPoint",
    "nonlinear_stability",
    "profile_overlap",
]


@dataclass(frozen=True)
class PacketSpec:
    """Gaussian packet exp[-(n - center)^2 / width^2 - i*momentum*n]."""

    center: float
    width: float
    momentum: float = np.pi / 2

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("packet width must be > 0")
        if abs(self.momentum) > np.pi:
            raise ValueError("|momentum| must be <= pi")


def gaussian_packet(spec: PacketSpec, n_sites: int) -> StateVector:
    """Normalized Gaussian wave packet on the centered site grid.

    Warns when the normalized edge amplitude exceeds 1e-8 (the packet does
    not fit the lattice cleanly).
    """
    n = site_indices(n_sites)
    amps = np.exp(-((n - spec.center) ** 2) / spec.width**2 - 1j * spec.momentum * n)
    amps = amps / np.linalg.norm(amps)
    edge = max(abs(amps[0]), abs(amps[-1]))
    if edge > 1e-8:
        warnings.warn(
            f"packet tail at lattice edge is {edge:.2e} (> 1e-8); "
            "boundary reflections may contaminate the run"
        )
    return StateVector(amps, 0.0)


@dataclass
class ReflectivityResult:
    """Left-half population fractions after a scattering run.

    r is the reflectivity used throughout: the left-half (n <= 0) population
    at t_f normalized by the surviving norm at t_f, which is the convention
    that saturates at 1 for total reflection even when the defect absorbs
    part of the packet.  r_initial_norm uses the t=0 norm instead.
    """

    r: float
    t_f: float
    norm0: float
    final_norm: float
    left_population: float

    @property
    def r_initial_norm(self) -> float:
        return self.left_population / self.norm0


def reflectivity(traj: Trajectory, t_f: float) -> ReflectivityResult:
    """Reflectivity of a trajectory at probe time t_f (nearest sample)."""
    i = traj.sample_index(t_f)
    state = traj.states[i]
    off = traj.config.site_offset
    left = float(np.sum(np.abs(state[: off + 1]) ** 2))  # sites n = -off .. 0
    final_norm = float(np.sum(np.abs(state) ** 2))
    if final_norm == 0.0:
        raise ValueError("state fully decayed; reflectivity undefined")
    return ReflectivityResult(
        r=left / final_norm,
        t_f=float(traj.times[i]),
        norm0=traj.initial_norm,
        final_norm=final_norm,
        left_population=left,
    )


def _scatter_one(args):
    config, packet, periods, steps = args
    traj = evolve(
        config,
        gaussian_packet(packet, config.n_sites),
        periods * config.drive.period,
        steps,
    )
    return traj, reflectivity(traj, traj.times[-1])


def reflectivity_sweep(
    config: LatticeConfig,
    gammas,
    packet: PacketSpec,
    periods: float = 30.0,
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
    jobs: int = 1,
) -> list[ReflectivityResult]:
    """R(gamma) at t_f = periods*T for the same packet, one run per gamma."""
    tasks = [(with_loss_strength(config, g), packet, periods, steps_per_period) for g in gammas]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scatter_one, tasks))
    else:
        results = [_scatter_one(t) for t in tasks]
    return [r for _, r in results]


@dataclass
class IprMap:
    """IPR and quasi-energy of every mode across a drive-strength grid."""

    gamma_norms: np.ndarray
    ipr: np.ndarray  # shape (n_gamma, N)
    re_eps: np.ndarray
    im_eps: np.ndarray


def _spectrum_row(args):
    config, steps = args
    spec = classified_spectrum(config, steps)
    eps = spec.quasi_energies()
    return spec.iprs(), eps.real, eps.imag


def ipr_map(
    config: LatticeConfig,
    gamma_norm_grid,
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
    jobs: int = 1,
) -> IprMap:
    """Full spectrum per grid point; rows ordered by mode_index (Re eps rank)."""
    grid = np.asarray(gamma_norm_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("gamma_norm grid is empty")
    tasks = [(with_drive(config, gamma_norm=g), steps_per_period) for g in grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_spectrum_row, tasks))
    else:
        rows = [_spectrum_row(t) for t in tasks]
    return IprMap(
        gamma_norms=grid,
        ipr=np.array([r[0] for r in rows]),
        re_eps=np.array([r[1] for r in rows]),
        im_eps=np.array([r[2] for r in rows]),
    )


@dataclass
class DecayPoint:
    value: float
    p: float
    dark_quasi_energy: complex
    gamma_norm: float


def _decay_one(args):
    config, t_probe, steps = args
    spec = classified_spectrum(config, steps)
    dark = dark_mode(spec)  # LookupError propagates to the caller
    traj = evolve(config, StateVector(dark.profile), t_probe, steps)
    return decay_probability(traj, traj.times[-1]), dark.quasi_energy


def decay_sweep(
    config: LatticeConfig,
    variable: str,
    grid,
    t_probe: float | None = None,
    retune_gamma_norm: bool = False,
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
    jobs: int = 1,
) -> list[DecayPoint]:
    """Decay probability of the dark BIC across a gamma or omega grid.

    variable='gamma' sweeps the loss strength at fixed drive; variable='omega'
    sweeps the frequency, either holding Gamma fixed or (retune_gamma_norm)
    re-solving the beta root per omega.  t_probe defaults to 8 periods of
    each point's drive.  Grid points without a dark BIC are skipped with a
    warning.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError(f"{variable} grid is empty")
    if variable not in ("gamma", "omega"):
        raise ValueError("variable must be 'gamma' or 'omega'")

    k = float(config.hopping[0])
    g = float(config.hopping[config.site_offset])

    tasks = []
    for v in grid:
        if variable == "gamma":
            c = with_loss_strength(config, v)
        else:
            gn = beta_root(k, g, v) if retune_gamma_norm else config.drive.gamma_norm
            c = with_drive(config, gamma_norm=gn, omega=v)
        tp = 8.0 * c.drive.period if t_probe is None else t_probe
        tasks.append((c, tp, steps_per_period))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(_decay_one_safe, tasks))
    else:
        raw = [_decay_one_safe(t) for t in tasks]
    points = []
    for v, r in zip(grid, raw):
        if r is None:
            warnings.warn(f"decay_sweep: skipping {variable}={v}: no dark BIC")
        else:
            points.append(DecayPoint(float(v), r[0], r[1], r[2]))
    return points


def _decay_one_safe(args):
    try:
        p, eps = _decay_one(args)
    except LookupError:
        return None
    return p, eps, args[0].drive.gamma_norm


def profile_overlap(a: np.ndarray, b: np.ndarray) -> float:
    """Phase-insensitive squared overlap of two renormalized profiles."""
    a = np.asarray(a) / np.linalg.norm(a)
    b = np.asarray(b) / np.linalg.norm(b)
    return float(abs(np.vdot(a, b)) ** 2)


@dataclass
class EvolutionReport:
    overlap: float
    p_final: float
    dark_quasi_energy: complex
    lossy_population: float
    period_norms: np.ndarray
    trajectory: Trajectory
    initial_profile: np.ndarray
    final_profile: np.ndarray


def dark_bic_evolution(
    config: LatticeConfig,
    horizon_periods: float,
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
    samples_per_period: int = 32,
) -> EvolutionReport:
    """Evolve the dark BIC for a horizon and report its profile stability."""
    spec = classified_spectrum(config, steps_per_period)
    dark = dark_mode(spec)
    lossy_pop = float(np.sum(np.abs(dark.profile[config.loss > 0]) ** 2))
    traj = evolve(
        config,
        StateVector(dark.profile),
        horizon_periods * config.drive.period,
        steps_per_period,
        samples_per_period=samples_per_period,
    )
    final = traj.states[-1]
    norms = traj.norms()
    # norm once per period, taken from the sample grid
    per_period = norms[:: max(1, samples_per_period)]
    return EvolutionReport(
        overlap=profile_overlap(dark.profile, final),
        p_final=float(traj.leak[-1]),
        dark_quasi_energy=dark.quasi_energy,
        lossy_population=lossy_pop,
        period_norms=per_period,
        trajectory=traj,
        initial_profile=dark.profile.copy(),
        final_profile=final.copy(),
    )


@dataclass
class NonlinearPoint:
    u: float
    p: float
    overlap: float


def nonlinear_stability(
    config: LatticeConfig,
    u_grid,
    horizon_periods: float = 8.0,
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
) -> list[NonlinearPoint]:
    """P(horizon) and profile overlap versus nonlinearity strength u.

    The initial state is always the dark BIC of the linear (u=0) system;
    each run then evolves it under the rescaled nonlinearity pattern.
    """
    u_grid = np.asarray(u_grid, dtype=float)
    if u_grid.size == 0:
        raise ValueError("u grid is empty")
    linear = with_nonlinearity_strength(config, 0.0)
    spec = classified_spectrum(linear, steps_per_period)
    dark = dark_mode(spec)
    t_final = horizon_periods * config.drive.period

    out = []
    for u in u_grid:
        c = with_nonlinearity_strength(config, float(u))
        traj = evolve(c, StateVector(dark.profile), t_final, steps_per_period)
        out.append(
            NonlinearPoint(
                u=float(u),
                p=float(traj.leak[-1]),
                overlap=profile_overlap(dark.profile, traj.states[-1]),
            )
        )
    return out
