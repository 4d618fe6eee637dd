"""Time-dependent non-Hermitian tight-binding lattice and its parameter profiles.

The model is a one-dimensional chain with nearest-neighbor hopping K_n
(bond n couples sites n and n+1), a spatially linear ac drive
F0*cos(omega*t)*a*n on the diagonal, on-site loss -i*gamma_n, and an
optional local Kerr-type nonlinearity U_n.  Sites are indexed by the
signed integer n = -(N-1)/2 ... +(N-1)/2 with open boundaries; storage
maps site n to array offset n + (N-1)/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

__all__ = [
    "LatticeConfig",
    "DriveParams",
    "hamiltonian_at",
    "rotating_hamiltonian_at",
    "paper_defect_profile",
    "multimode_profile",
    "uniform_profile",
    "explicit_profile",
    "with_drive",
    "with_loss_strength",
    "with_nonlinearity_strength",
    "site_indices",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float).copy()
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DriveParams:
    """Dimensionless drive knobs: gamma_norm = F0*a/omega and period T = 2*pi/omega."""

    gamma_norm: float
    period: float

    def __post_init__(self):
        if self.gamma_norm < 0:
            raise ValueError("gamma_norm must be >= 0")
        if self.period <= 0:
            raise ValueError("period must be > 0")


@dataclass(frozen=True)
class LatticeConfig:
    """Full static description of the driven dissipative chain.

    Attributes:
        n_sites: odd site count N; site 0 is the chain center.
        hopping: length N-1 array, entry i couples array sites i and i+1.
        loss: length N array of on-site decay rates gamma_n >= 0.
        drive_amplitude: F0 (energy per length).
        drive_frequency: omega > 0.
        lattice_constant: a.
        nonlinearity: length N array U_n (all zero for the linear model).
    """

    n_sites: int
    hopping: np.ndarray
    loss: np.ndarray
    drive_amplitude: float
    drive_frequency: float
    lattice_constant: float = 1.0
    nonlinearity: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.n_sites < 1 or self.n_sites % 2 == 0:
            raise ValueError("n_sites must be a positive odd integer")
        object.__setattr__(self, "hopping", _readonly(self.hopping))
        object.__setattr__(self, "loss", _readonly(self.loss))
        if self.nonlinearity is None:
            object.__setattr__(self, "nonlinearity", _readonly(np.zeros(self.n_sites)))
        else:
            object.__setattr__(self, "nonlinearity", _readonly(self.nonlinearity))
        if len(self.hopping) != self.n_sites - 1:
            raise ValueError("hopping array must have length n_sites - 1")
        if len(self.loss) != self.n_sites:
            raise ValueError("loss array must have length n_sites")
        if len(self.nonlinearity) != self.n_sites:
            raise ValueError("nonlinearity array must have length n_sites")
        if np.any(self.loss < 0):
            raise ValueError("loss rates must be >= 0 (purely dissipative model)")
        if self.drive_frequency <= 0:
            raise ValueError("drive_frequency must be > 0")

    @property
    def drive(self) -> DriveParams:
        w = self.drive_frequency
        return DriveParams(
            gamma_norm=abs(self.drive_amplitude) * self.lattice_constant / w,
            period=2.0 * np.pi / w,
        )

    @property
    def is_nonlinear(self) -> bool:
        return bool(np.any(self.nonlinearity != 0.0))

    @property
    def site_offset(self) -> int:
        return (self.n_sites - 1) // 2


def site_indices(n_sites: int) -> np.ndarray:
    """Signed site indices -(N-1)/2 ... +(N-1)/2."""
    off = (n_sites - 1) // 2
    return np.arange(n_sites) - off


def hamiltonian_at(config: LatticeConfig, t: float) -> np.ndarray:
    """Lab-frame Hamiltonian H(t) as a dense complex N x N matrix.

    Off-diagonals are the hopping K_n; the diagonal is
    a*F0*cos(omega*t)*n - i*gamma_n.  The hopping and drive parts are
    Hermitian, the loss part anti-Hermitian.
    """
    if not np.isfinite(t):
        raise ValueError("t must be finite")
    N = config.n_sites
    n = site_indices(N)
    H = np.zeros((N, N), dtype=complex)
    K = config.hopping
    H[np.arange(N - 1) + 1, np.arange(N - 1)] = K
    H[np.arange(N - 1), np.arange(N - 1) + 1] = K
    drive = config.drive_amplitude * config.lattice_constant * np.cos(config.drive_frequency * t)
    H[np.diag_indices(N)] = drive * n - 1j * config.loss
    return H


def rotating_hamiltonian_at(config: LatticeConfig, t: float) -> np.ndarray:
    """Rotating-frame Hamiltonian H'(t) with the drive gauged into hopping phases.

    The gauge S(t) = exp[-i*Gamma*sin(omega*t)*n] removes the diagonal
    drive; the bond n->n+1 matrix element becomes K_n*exp(+i*Gamma*sin(omega*t))
    and the loss diagonal is unchanged.  Lab amplitudes are recovered via
    C_lab = exp(-i*Gamma*sin(omega*t)*n) * C_rot.
    """
    if not np.isfinite(t):
        raise ValueError("t must be finite")
    N = config.n_sites
    H = np.zeros((N, N), dtype=complex)
    K = config.hopping
    phase = np.exp(1j * config.drive.gamma_norm * np.sin(config.drive_frequency * t))
    H[np.arange(N - 1) + 1, np.arange(N - 1)] = K * phase
    H[np.arange(N - 1), np.arange(N - 1) + 1] = K * np.conj(phase)
    H[np.diag_indices(N)] = -1j * config.loss
    return H


def _drive_fields(gamma_norm, f0, omega, a):
    if gamma_norm is not None and f0 is not None:
        raise ValueError("give either gamma_norm or f0, not both")
    if gamma_norm is not None:
        f0 = gamma_norm * omega / a
    elif f0 is None:
        f0 = 0.0
    return f0, omega, a


def paper_defect_profile(
    n_sites: int,
    k: float,
    g: float,
    gamma: float,
    *,
    gamma_norm: float | None = None,
    f0: float | None = None,
    omega: float = 1.0,
    a: float = 1.0,
    u: float = 0.0,
) -> LatticeConfig:
    """Defect profile: bonds n = -3..2 carry hopping g, losses sit at n = +-1.

    The optional nonlinearity u is placed on the lossy sites, matching the
    nonlinear runs.  Requires n_sites >= 9 so the profile fits.
    """
    if n_sites < 9:
        raise ValueError("paper_defect_profile needs n_sites >= 9")
    return multimode_profile(
        n_sites, 3, k, g, gamma, gamma_norm=gamma_norm, f0=f0, omega=omega, a=a, u=u
    )


def multimode_profile(
    n_sites: int,
    M: int,
    k: float,
    g: float,
    gamma: float,
    *,
    gamma_norm: float | None = None,
    f0: float | None = None,
    omega: float = 1.0,
    a: float = 1.0,
    u: float = 0.0,
) -> LatticeConfig:
    """Generalized defect: bonds -M..M-1 carry g, losses at n = -M+2m, m=1..M-1.

    M=3 reproduces paper_defect_profile field by field.  The nonlinearity
    u (if any) is placed on the lossy sites.
    """
    if M < 2:
        raise ValueError("multimode_profile needs M >= 2")
    # at least one uniform bond must remain on each side of the g-region
    if n_sites < 2 * M + 3:
        raise ValueError(f"n_sites={n_sites} too small for M={M} (needs >= {2 * M + 3})")
    if k <= 0 or g <= 0:
        raise ValueError("hoppings k, g must be > 0")
    if gamma < 0:
        raise ValueError("gamma must be >= 0")
    off = (n_sites - 1) // 2
    K = np.full(n_sites - 1, k)
    K[-M + off : M + off] = g
    G = np.zeros(n_sites)
    U = np.zeros(n_sites)
    for m in range(1, M):
        G[-M + 2 * m + off] = gamma
        U[-M + 2 * m + off] = u
    f0, omega, a = _drive_fields(gamma_norm, f0, omega, a)
    return LatticeConfig(n_sites, K, G, f0, omega, a, U)


def uniform_profile(
    n_sites: int,
    k: float,
    *,
    gamma_norm: float | None = None,
    f0: float | None = None,
    omega: float = 1.0,
    a: float = 1.0,
    u: float = 0.0,
) -> LatticeConfig:
    """Defect-free lossless chain with uniform hopping k (and uniform U_n = u)."""
    f0, omega, a = _drive_fields(gamma_norm, f0, omega, a)
    return LatticeConfig(
        n_sites,
        np.full(n_sites - 1, k),
        np.zeros(n_sites),
        f0,
        omega,
        a,
        np.full(n_sites, u),
    )


def explicit_profile(
    hopping: Sequence[float],
    loss: Sequence[float],
    *,
    nonlinearity: Sequence[float] | None = None,
    gamma_norm: float | None = None,
    f0: float | None = None,
    omega: float = 1.0,
    a: float = 1.0,
) -> LatticeConfig:
    """Chain built from explicit per-bond / per-site arrays."""
    loss = np.asarray(loss, dtype=float)
    n_sites = len(loss)
    f0, omega, a = _drive_fields(gamma_norm, f0, omega, a)
    nl = None if nonlinearity is None else np.asarray(nonlinearity, dtype=float)
    return LatticeConfig(n_sites, np.asarray(hopping, dtype=float), loss, f0, omega, a, nl)


def with_drive(
    config: LatticeConfig,
    *,
    gamma_norm: float | None = None,
    f0: float | None = None,
    omega: float | None = None,
    a: float | None = None,
) -> LatticeConfig:
    """Copy of config with drive parameters replaced.

    When gamma_norm is given, F0 is recomputed as gamma_norm*omega/a so the
    dimensionless drive strength is held fixed (omega sweeps at fixed Gamma).
    """
    omega = config.drive_frequency if omega is None else omega
    a = config.lattice_constant if a is None else a
    if gamma_norm is not None and f0 is not None:
        raise ValueError("give either gamma_norm or f0, not both")
    if gamma_norm is not None:
        f0 = gamma_norm * omega / a
    elif f0 is None:
        f0 = config.drive_amplitude
    return replace(config, drive_amplitude=f0, drive_frequency=omega, lattice_constant=a)


def with_loss_strength(config: LatticeConfig, gamma: float) -> LatticeConfig:
    """Copy of config with the loss pattern rescaled to strength gamma.

    The set of lossy sites is preserved; each nonzero gamma_n is replaced by
    gamma.  A config without lossy sites carries no pattern to rescale, so
    asking for gamma > 0 on one is an error rather than a silent no-op.
    """
    mask = config.loss > 0
    if gamma > 0 and not np.any(mask):
        raise ValueError("config has no lossy sites; build the profile with gamma > 0 first")
    return replace(config, loss=np.where(mask, gamma, 0.0))


def with_nonlinearity_strength(config: LatticeConfig, u: float) -> LatticeConfig:
    """Copy of config with the nonlinearity pattern rescaled to strength u.

    Uses the support of the existing U_n array as the pattern; if the config
    has no U_n support, u is applied to the lossy sites instead (the standard
    nonlinear setup).
    """
    mask = config.nonlinearity != 0
    if not np.any(mask):
        mask = config.loss > 0
    return replace(config, nonlinearity=np.where(mask, u, 0.0))
