"""Monodromy operator, complex quasi-energy spectra, and mode classification.

The one-period evolution operator U(T,0) is built by propagating the full
identity matrix with the shared fixed-step RK4 integrator in the rotating
frame (the gauge is T-periodic and equals the identity at t=0 and t=T, so
the monodromy is frame independent).  Quasi-energies follow from the
principal logarithm, eps = (i/T) Log lambda, giving Re(eps) in
(-omega/2, omega/2] and Im(eps) = ln|lambda| / T <= 0 for a dissipative
chain.  Localized modes are separated from the scattering continuum by the
inverse participation ratio and the effective band interval.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .integrator import DEFAULT_STEPS_PER_PERIOD, MIN_STEPS_PER_PERIOD
from .lattice import LatticeConfig, with_loss_strength

__all__ = [
    "FloquetMode",
    "SpectrumResult",
    "monodromy",
    "floquet_spectrum",
    "ipr",
    "continuum_band",
    "classify",
    "classified_spectrum",
    "dark_mode",
    "dark_bic_imag_trend",
    "DEFAULT_IPR_THRESHOLD",
    "DEFAULT_POP_TOL",
    "DEFAULT_BAND_MARGIN_FRAC",
]

DEFAULT_IPR_THRESHOLD = 0.1
DEFAULT_POP_TOL = 1e-2
# band margin as a fraction of the effective half-width 2k|J0(Gamma)|; near a
# band collapse every spectral scale shrinks like 1/omega^2, so a margin
# proportional to the width stays valid where a fixed one would swallow the
# detached bound states
DEFAULT_BAND_MARGIN_FRAC = 0.03


@dataclass
class FloquetMode:
    """One eigenpair of the monodromy operator."""

    quasi_energy: complex
    profile: np.ndarray
    ipr: float
    mode_index: int
    label: str | None = None  # 'extended' | 'BIC' | 'BOC' | 'dark_BIC'

    @property
    def re(self) -> float:
        return float(self.quasi_energy.real)

    @property
    def im(self) -> float:
        return float(self.quasi_energy.imag)


@dataclass
class SpectrumResult:
    """All Floquet modes of one parameter point, sorted by (Re eps, -Im eps, IPR)."""

    modes: list[FloquetMode]
    omega: float
    band: tuple[float, float] | None = None
    thresholds: dict | None = None

    def __len__(self) -> int:
        return len(self.modes)

    def quasi_energies(self) -> np.ndarray:
        return np.array([m.quasi_energy for m in self.modes])

    def iprs(self) -> np.ndarray:
        return np.array([m.ipr for m in self.modes])

    def labeled(self, label: str) -> list[FloquetMode]:
        return [m for m in self.modes if m.label == label]

    def bound_modes(self) -> list[FloquetMode]:
        return [m for m in self.modes if m.label in ("BIC", "BOC", "dark_BIC")]


def monodromy(
    config: LatticeConfig, steps_per_period: int = DEFAULT_STEPS_PER_PERIOD
) -> np.ndarray:
    """One-period evolution operator U(T,0) for the linear model.

    All N basis columns are propagated together through one RK4 pass in the
    rotating frame.  For gamma_n >= 0 every singular value is <= 1 (up to
    integration error).
    """
    if config.is_nonlinear:
        raise ValueError("monodromy is defined for the linear model only (all U_n = 0)")
    if steps_per_period < MIN_STEPS_PER_PERIOD:
        raise ValueError(f"steps_per_period must be >= {MIN_STEPS_PER_PERIOD}")

    N = config.n_sites
    K = config.hopping[:, None]
    G = config.loss[:, None]
    gnorm = config.drive.gamma_norm
    w = config.drive_frequency
    T = config.drive.period
    dt = T / steps_per_period

    def rhs(t, C):
        ph = np.exp(1j * gnorm * np.sin(w * t))
        out = -G * C
        out[1:] += (-1j * ph) * (K * C[:-1])
        out[:-1] += (-1j * np.conj(ph)) * (K * C[1:])
        return out

    U = np.eye(N, dtype=complex)
    half = dt / 2.0
    sixth = dt / 6.0
    t = 0.0
    for step in range(steps_per_period):
        k1 = rhs(t, U)
        k2 = rhs(t + half, U + half * k1)
        k3 = rhs(t + half, U + half * k2)
        k4 = rhs(t + dt, U + dt * k3)
        U = U + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        t = (step + 1) * dt
    return U


def _canonical_phase(V: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    idx = np.argmax(np.abs(V), axis=0)
    pivots = V[idx, np.arange(V.shape[1])]
    phases = pivots / np.abs(pivots)
    return V / phases[None, :]


def floquet_spectrum(U: np.ndarray, omega: float) -> SpectrumResult:
    """Eigen-decompose a monodromy matrix into unclassified Floquet modes.

    eps = (i/T) Log(lambda): Re(eps) folded into (-omega/2, omega/2],
    Im(eps) = ln|lambda|/T.  Eigenvalues that underflow to |lambda| = 0
    (overdamped modes at very large gamma) get Im(eps) = -inf.
    """
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValueError("monodromy matrix must be square")
    T = 2.0 * np.pi / omega
    try:
        lam, V = np.linalg.eig(U)
    except np.linalg.LinAlgError as exc:
        cond = float(np.linalg.cond(U)) if np.all(np.isfinite(U)) else np.inf
        raise np.linalg.LinAlgError(
            f"monodromy eigendecomposition failed (condition estimate {cond:.3e})"
        ) from exc

    with np.errstate(divide="ignore"):
        im = np.log(np.abs(lam)) / T
    re = -np.angle(lam) / T
    # np.angle returns (-pi, pi]; map the Re = -omega/2 edge into the zone
    re = np.where(re <= -omega / 2.0, re + omega, re)

    V = V / np.linalg.norm(V, axis=0)
    V = _canonical_phase(V)
    iprs = np.sum(np.abs(V) ** 4, axis=0)

    order = np.lexsort((iprs, -im, re))
    modes = [
        FloquetMode(
            quasi_energy=complex(re[j], im[j]),
            profile=V[:, j].copy(),
            ipr=float(iprs[j]),
            mode_index=rank,
        )
        for rank, j in enumerate(order)
    ]
    return SpectrumResult(modes=modes, omega=omega)


def ipr(profile: np.ndarray) -> float:
    """Inverse participation ratio sum|C|^4 / (sum|C|^2)^2 (scale invariant)."""
    p = np.asarray(profile)
    s2 = float(np.sum(np.abs(p) ** 2))
    if s2 == 0.0:
        raise ValueError("ipr of the zero vector is undefined")
    return float(np.sum(np.abs(p) ** 4) / s2**2)


def continuum_band(
    config: LatticeConfig, gamma_norm: float, margin: float | None = None
) -> tuple[float, float]:
    """Interval [-W - delta, W + delta] bounding the scattering continuum.

    W = 2*k*|J0(Gamma)| is the effective bandwidth of the driven bulk, with
    k the bulk hopping read from the chain edge (all built-in profiles have
    uniform bulk bonds at the edges).  The default margin is
    DEFAULT_BAND_MARGIN_FRAC * W.
    """
    from .hfe import bessel_j

    k = float(config.hopping[0])
    half_width = 2.0 * k * abs(bessel_j(0, gamma_norm))
    if margin is None:
        margin = DEFAULT_BAND_MARGIN_FRAC * half_width
    return (-half_width - margin, half_width + margin)


def classify(
    spectrum: SpectrumResult,
    band: tuple[float, float],
    loss: np.ndarray,
    ipr_threshold: float = DEFAULT_IPR_THRESHOLD,
    dark_tol: float | None = None,
    pop_tol: float = DEFAULT_POP_TOL,
) -> SpectrumResult:
    """Label every mode as extended / BIC / BOC, and mark the dark BIC.

    A mode is bound when its IPR reaches ipr_threshold; bound modes inside
    the band interval are BICs, outside it BOCs.  Among the BICs, the one
    of minimal |Im eps| is the dark BIC provided |Re eps| < dark_tol
    (default 1e-3 * omega) and its population on the lossy sites stays
    below pop_tol.
    """
    if dark_tol is None:
        dark_tol = 1e-3 * spectrum.omega
    loss = np.asarray(loss)
    lossy = loss > 0

    lo, hi = band
    labeled = []
    for m in spectrum.modes:
        if m.ipr >= ipr_threshold:
            label = "BIC" if lo <= m.re <= hi else "BOC"
        else:
            label = "extended"
        labeled.append(replace(m, label=label))

    bics = [m for m in labeled if m.label == "BIC"]
    if bics:
        cand = min(bics, key=lambda m: abs(m.im))
        pop = float(np.sum(np.abs(cand.profile[lossy]) ** 2))
        if abs(cand.re) < dark_tol and pop < pop_tol:
            i = labeled.index(cand)
            labeled[i] = replace(cand, label="dark_BIC")

    return SpectrumResult(
        modes=labeled,
        omega=spectrum.omega,
        band=band,
        thresholds={"ipr": ipr_threshold, "dark_tol": dark_tol, "pop_tol": pop_tol},
    )


def classified_spectrum(
    config: LatticeConfig,
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
    ipr_threshold: float = DEFAULT_IPR_THRESHOLD,
    dark_tol: float | None = None,
    pop_tol: float = DEFAULT_POP_TOL,
    band_margin: float | None = None,
) -> SpectrumResult:
    """Monodromy -> spectrum -> classify pipeline for one parameter point."""
    U = monodromy(config, steps_per_period)
    spec = floquet_spectrum(U, config.drive_frequency)
    band = continuum_band(config, config.drive.gamma_norm, band_margin)
    return classify(spec, band, config.loss, ipr_threshold, dark_tol, pop_tol)


def dark_mode(spectrum: SpectrumResult) -> FloquetMode:
    """The unique mode labeled dark_BIC; raises LookupError if absent."""
    dark = spectrum.labeled("dark_BIC")
    if not dark:
        raise LookupError("spectrum contains no dark BIC")
    return dark[0]


def dark_bic_imag_trend(
    config: LatticeConfig,
    gammas: Sequence[float],
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
) -> list[float]:
    """Im(eps) of the dark BIC for each loss strength in gammas.

    The loss pattern of config is rescaled per point.  Raises LookupError,
    naming the offending gamma, when a point has no dark BIC.
    """
    out = []
    for gamma in gammas:
        spec = classified_spectrum(with_loss_strength(config, gamma), steps_per_period)
        try:
            out.append(dark_mode(spec).im)
        except LookupError as exc:
            raise LookupError(f"no dark BIC at gamma={gamma}") from exc
    return out
