"""High-frequency-expansion analytics for the driven dissipative chain.

In the rotating frame the drive turns into Bessel-weighted hopping phases
(Jacobi-Anger), the first-order correction vanishes identically, and the
second order renormalizes each bond to

    Theta_n = K_n J0(G) - Q(G)/omega^2 * (K_n K_{n+1}^2 - 2 K_n^3 + K_n K_{n-1}^2),

with Q(G) = -sum_{l,j != 0} J_l(G) J_j(G) J_{j-l}(G) / (l j).  For the defect
profile this yields the four named rates eta, zeta, alpha, beta; tuning the
drive to the root of beta decouples a (2M-1)-site chain whose tridiagonal
Hamiltonian carries an exact zero-energy dark state with support only on
its odd sites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .lattice import LatticeConfig

__all__ = [
    "bessel_j",
    "bessel_ladder",
    "q_gamma",
    "QConvergenceError",
    "effective_hopping",
    "effective_model",
    "named_rates",
    "EffectiveRates",
    "EffectiveModel",
    "beta_root",
    "effective_hamiltonian",
    "reduced_chain",
    "ReducedChain",
    "five_state_eigenvalues",
    "rotating_harmonic",
    "hfe_vs_exact",
    "HfeComparison",
    "DEFAULT_TRUNCATION",
]

DEFAULT_TRUNCATION = 20

_MAX_ORDER = 60
_MAX_ARG = 30.0
_SERIES_CUTOFF = 9.0
# downward-recurrence headroom above max(order, x); contamination decays
# super-exponentially in this margin
_MILLER_MARGIN = 40


class QConvergenceError(ArithmeticError):
    """Raised when the truncation-doubling test for Q(Gamma) fails."""


def _series_j(order: int, x: float) -> float:
    # ascending power series; safe for x <= _SERIES_CUTOFF in double precision
    half = 0.5 * x
    term = half**order / math.factorial(order)
    total = term
    m = 0
    while True:
        m += 1
        term *= -(half * half) / (m * (m + order))
        total += term
        if abs(term) < 1e-18 * (abs(total) + 1e-300) and m > 4:
            return total


def bessel_ladder(x: float, l_max: int) -> np.ndarray:
    """J_0(x) .. J_{l_max}(x) by normalized backward recurrence.

    Valid for x >= 0; used internally wherever a whole harmonic ladder is
    needed (Q sums, rotating-frame harmonics).
    """
    if x < 0:
        raise ValueError("bessel_ladder needs x >= 0")
    if x == 0.0:
        out = np.zeros(l_max + 1)
        out[0] = 1.0
        return out
    start = max(l_max, int(math.ceil(x))) + _MILLER_MARGIN
    if start % 2:
        start += 1
    ladder = np.zeros(start + 2)
    ladder[start + 1] = 0.0
    ladder[start] = 1e-30
    for m in range(start, 0, -1):
        ladder[m - 1] = (2.0 * m / x) * ladder[m] - ladder[m + 1]
        if abs(ladder[m - 1]) > 1e250:
            ladder[: start + 2] *= 1e-250
    norm = ladder[0] + 2.0 * np.sum(ladder[2 : start + 1 : 2])
    return ladder[: l_max + 1] / norm


def bessel_j(order: int, x: float) -> float:
    """Integer-order Bessel function of the first kind J_order(x).

    Power series below x = 9, normalized backward recurrence above; absolute
    error below 1e-12 on the supported range |order| <= 60, 0 <= x <= 30.
    Negative orders use the parity identity J_{-l} = (-1)^l J_l.
    """
    if not float(order).is_integer():
        raise ValueError("order must be an integer")
    order = int(order)
    if abs(order) > _MAX_ORDER:
        raise ValueError(f"|order| must be <= {_MAX_ORDER}")
    if not (0.0 <= x <= _MAX_ARG):
        raise ValueError(f"x must lie in [0, {_MAX_ARG}]")
    sign = -1.0 if (order < 0 and order % 2) else 1.0
    l = abs(order)
    if x == 0.0:
        return 1.0 if l == 0 else 0.0
    if x < _SERIES_CUTOFF:
        return sign * _series_j(l, x)
    return sign * float(bessel_ladder(x, l)[l])


def _signed_ladder(x: float, l_max: int) -> np.ndarray:
    """J_l(x) for l = -l_max .. +l_max as an array indexed by l + l_max."""
    pos = bessel_ladder(x, l_max)
    full = np.empty(2 * l_max + 1)
    full[l_max:] = pos
    signs = np.where(np.arange(1, l_max + 1) % 2 == 1, -1.0, 1.0)
    full[:l_max] = (signs * pos[1:])[::-1]
    return full


def q_gamma(gamma_norm: float, truncation: int = DEFAULT_TRUNCATION, verify: bool = False) -> float:
    """Second-order HFE coefficient Q(Gamma), truncated at |l|, |j| <= truncation.

    With verify=True the sum is recomputed at twice the truncation and a
    QConvergenceError is raised if the two differ by 1e-10 or more.
    """
    if truncation < 10:
        raise ValueError("truncation must be >= 10")

    def q_at(L):
        J = _signed_ladder(abs(gamma_norm), 2 * L)
        ls = np.arange(-L, L + 1)
        l = ls[ls != 0]
        weighted = J[l + 2 * L] / l  # J_l / l over signed l
        Jdiff = J[(l[None, :] - l[:, None]) + 2 * L]  # J_{j-l} at [l, j]
        return float(-np.sum(weighted[:, None] * weighted[None, :] * Jdiff))

    q = q_at(truncation)
    if verify:
        q2 = q_at(2 * truncation)
        if abs(q - q2) >= 1e-10:
            raise QConvergenceError(
                f"Q(Gamma={gamma_norm}) not converged: L={truncation} gives {q!r}, "
                f"L={2 * truncation} gives {q2!r}"
            )
    return q


def effective_hopping(config: LatticeConfig, gamma_norm: float, omega: float) -> np.ndarray:
    """Effective bond strengths Theta_n of the static second-order Hamiltonian.

    Out-of-range neighbor hoppings at the chain ends replicate the edge bond.
    """
    K = np.asarray(config.hopping, dtype=float)
    j0 = bessel_j(0, gamma_norm)
    q = q_gamma(gamma_norm)
    Kp = np.concatenate([K[1:], K[-1:]])  # K_{n+1}
    Km = np.concatenate([K[:1], K[:-1]])  # K_{n-1}
    bracket = K * Kp**2 - 2.0 * K**3 + K * Km**2
    return K * j0 - (q / omega**2) * bracket


class EffectiveRates(NamedTuple):
    eta: float
    zeta: float
    alpha: float
    beta: float


def named_rates(
    k: float, g: float, gamma_norm: float, omega: float, truncation: int = DEFAULT_TRUNCATION
) -> EffectiveRates:
    """The four effective hoppings of the defect profile.

    eta and zeta are the zeroth-order bulk and defect bonds; alpha and beta
    are the interface bonds including the second-order correction:
        alpha = k J0 - Q/omega^2 * k (g^2 - k^2)
        beta  = g J0 + Q/omega^2 * g (g^2 - k^2)
    """
    j0 = bessel_j(0, gamma_norm)
    q = q_gamma(gamma_norm, truncation)
    d = g * g - k * k
    return EffectiveRates(
        eta=k * j0,
        zeta=g * j0,
        alpha=k * j0 - (q / omega**2) * k * d,
        beta=g * j0 + (q / omega**2) * g * d,
    )


def beta_root(
    k: float,
    g: float,
    omega: float,
    bracket: tuple[float, float] = (2.2, 2.6),
    truncation: int = DEFAULT_TRUNCATION,
) -> float:
    """Drive strength Gamma* where the interface bond beta vanishes.

    Solved by bracketed root finding to |beta(Gamma*)| < 1e-12; raises
    ValueError when beta does not change sign over the bracket.
    """

    def f(gn):
        return named_rates(k, g, gn, omega, truncation).beta

    a, b = bracket
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise ValueError(f"beta has no sign change on bracket [{a}, {b}]")
    root = optimize.brentq(f, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    if abs(f(root)) >= 1e-12:
        raise ArithmeticError(f"beta root did not converge: |beta({root})| = {abs(f(root)):.3e}")
    return float(root)


def effective_hamiltonian(config: LatticeConfig, gamma_norm: float, omega: float) -> np.ndarray:
    """Static effective Hamiltonian: Theta_n off-diagonals, -i gamma_n diagonal."""
    N = config.n_sites
    theta = effective_hopping(config, gamma_norm, omega)
    H = np.zeros((N, N), dtype=complex)
    H[np.arange(N - 1) + 1, np.arange(N - 1)] = theta
    H[np.arange(N - 1), np.arange(N - 1) + 1] = theta
    H[np.diag_indices(N)] = -1j * config.loss
    return H


@dataclass
class EffectiveModel:
    """Bundle of the HFE outputs for one (config, Gamma, omega) point."""

    theta: np.ndarray
    rates: EffectiveRates | None
    q: float
    omega: float
    truncation: int


def effective_model(
    config: LatticeConfig, gamma_norm: float, omega: float, truncation: int = DEFAULT_TRUNCATION
) -> EffectiveModel:
    """Evaluate the full second-order effective description of one config.

    The named rates are attached when the profile has the defect form
    (bulk bond at the edge, defect bond at the center); otherwise only the
    Theta array is meaningful.
    """
    theta = effective_hopping(config, gamma_norm, omega)
    k = float(config.hopping[0])
    g = float(config.hopping[config.site_offset])
    rates = named_rates(k, g, gamma_norm, omega, truncation)
    return EffectiveModel(
        theta=theta,
        rates=rates,
        q=q_gamma(gamma_norm, truncation),
        omega=omega,
        truncation=truncation,
    )


@dataclass
class ReducedChain:
    """The decoupled (2M-1)-site chain left after tuning beta to zero.

    The matrix is tridiagonal with zeta on every bond and -i*gamma on the
    even (1-based) sites; its analytic dark state alternates +1/-1 on the
    odd sites and is annihilated exactly.
    """

    M: int
    zeta: float
    gamma: float
    matrix: np.ndarray
    dark_state: np.ndarray
    eigenvalues: np.ndarray

    @property
    def dim(self) -> int:
        return 2 * self.M - 1


def reduced_chain(M: int, zeta: float, gamma: float) -> ReducedChain:
    """Build the (2M-1)-state effective chain and solve it."""
    if M < 2:
        raise ValueError("reduced_chain needs M >= 2")
    d = 2 * M - 1
    H = np.zeros((d, d), dtype=complex)
    idx = np.arange(d - 1)
    H[idx + 1, idx] = zeta
    H[idx, idx + 1] = zeta
    H[np.arange(1, d, 2), np.arange(1, d, 2)] = -1j * gamma

    w = np.zeros(d, dtype=complex)
    w[0::2] = [(-1.0) ** j for j in range(M)]
    w = w / np.linalg.norm(w)

    eig = np.linalg.eigvals(H)
    eig = eig[np.lexsort((-eig.imag, eig.real))]
    return ReducedChain(M=M, zeta=zeta, gamma=gamma, matrix=H, dark_state=w, eigenvalues=eig)


def five_state_eigenvalues(zeta: float, gamma: float) -> np.ndarray:
    """Closed-form eigenvalues of the M=3 (five-state) reduced chain.

    E1 = 0, E23 = -i*gamma/2 +- sqrt(12 zeta^2 - gamma^2)/2,
    E45 = -i*gamma/2 +- sqrt((2 zeta + gamma)(2 zeta - gamma))/2.
    """
    s23 = np.sqrt(complex(12.0 * zeta**2 - gamma**2))
    s45 = np.sqrt(complex((2.0 * zeta + gamma) * (2.0 * zeta - gamma)))
    return np.array(
        [
            0.0,
            -0.5j * gamma + 0.5 * s23,
            -0.5j * gamma - 0.5 * s23,
            -0.5j * gamma + 0.5 * s45,
            -0.5j * gamma - 0.5 * s45,
        ]
    )


def rotating_harmonic(config: LatticeConfig, gamma_norm: float, l: int) -> np.ndarray:
    """Fourier component H'_l of the rotating-frame Hamiltonian.

    H'_l = sum_n K_n [J_l |n+1><n| + J_{-l} |n><n+1|] for l != 0, plus the
    loss diagonal in H'_0.
    """
    N = config.n_sites
    K = config.hopping
    jl = bessel_j(l, gamma_norm)
    jml = bessel_j(-l, gamma_norm)
    H = np.zeros((N, N), dtype=complex)
    H[np.arange(N - 1) + 1, np.arange(N - 1)] = K * jl
    H[np.arange(N - 1), np.arange(N - 1) + 1] = K * jml
    if l == 0:
        H[np.diag_indices(N)] = -1j * config.loss
    return H


@dataclass
class HfeComparison:
    """Exact dark-BIC quasi-energy vs the reduced-chain prediction."""

    dark_quasi_energy: complex
    exact_bics: np.ndarray
    reduced_eigenvalues: np.ndarray
    residuals: np.ndarray
    zeta: float
    gamma: float
    omega: float
    gamma_norm: float

    def as_dict(self) -> dict:
        return {
            "gamma_norm": self.gamma_norm,
            "omega": self.omega,
            "gamma": self.gamma,
            "zeta": self.zeta,
            "dark_quasi_energy": [self.dark_quasi_energy.real, self.dark_quasi_energy.imag],
            "exact_bics": [[z.real, z.imag] for z in self.exact_bics],
            "reduced_eigenvalues": [[z.real, z.imag] for z in self.reduced_eigenvalues],
            "residuals": list(self.residuals),
        }


def hfe_vs_exact(
    config: LatticeConfig, steps_per_period: int | None = None, M: int | None = None
) -> HfeComparison:
    """Compare exact BIC quasi-energies against the reduced-chain eigenvalues.

    Each exact BIC is matched to its nearest reduced eigenvalue; residuals
    are the corresponding distances.  The reduced chain uses zeta evaluated
    at the config's own drive strength.
    """
    from .floquet import classified_spectrum, dark_mode
    from .integrator import DEFAULT_STEPS_PER_PERIOD

    if config.is_nonlinear:
        raise ValueError("hfe_vs_exact needs a linear config")
    steps = DEFAULT_STEPS_PER_PERIOD if steps_per_period is None else steps_per_period
    gn = config.drive.gamma_norm
    omega = config.drive_frequency
    gamma = float(config.loss.max())
    if M is None:
        # infer M from the loss pattern: M-1 lossy sites
        M = int(np.count_nonzero(config.loss)) + 1
    # defect bond strength: the bond at the chain center
    g = float(config.hopping[config.site_offset])
    zeta = g * bessel_j(0, gn)

    chain = reduced_chain(M, zeta, gamma)
    spec = classified_spectrum(config, steps)
    bics = np.array([m.quasi_energy for m in spec.modes if m.label in ("BIC", "dark_BIC")])
    dark = dark_mode(spec).quasi_energy

    if len(bics):
        dist = np.abs(bics[:, None] - chain.eigenvalues[None, :])
        residuals = dist.min(axis=1)
    else:
        residuals = np.array([])
    return HfeComparison(
        dark_quasi_energy=dark,
        exact_bics=bics,
        reduced_eigenvalues=chain.eigenvalues,
        residuals=residuals,
        zeta=zeta,
        gamma=gamma,
        omega=omega,
        gamma_norm=gn,
    )
