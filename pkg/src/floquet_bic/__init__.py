"""Floquet spectra and dark bound states in the continuum for driven
dissipative tight-binding chains."""

__version__ = "0.1.0"

from .lattice import (  # noqa: F401
    DriveParams,
    LatticeConfig,
    explicit_profile,
    hamiltonian_at,
    multimode_profile,
    paper_defect_profile,
    rotating_hamiltonian_at,
    site_indices,
    uniform_profile,
    with_drive,
    with_loss_strength,
    with_nonlinearity_strength,
)
from .integrator import (  # noqa: F401
    StateVector,
    StepInstabilityError,
    Trajectory,
    decay_probability,
    evolve,
    evolve_nonlinear,
    norm,
)
from .floquet import (  # noqa: F401
    FloquetMode,
    SpectrumResult,
    classified_spectrum,
    classify,
    continuum_band,
    dark_bic_imag_trend,
    dark_mode,
    floquet_spectrum,
    ipr,
    monodromy,
)
from .hfe import (  # noqa: F401
    EffectiveModel,
    EffectiveRates,
    ReducedChain,
    bessel_j,
    beta_root,
    effective_hamiltonian,
    effective_hopping,
    effective_model,
    five_state_eigenvalues,
    hfe_vs_exact,
    named_rates,
    q_gamma,
    reduced_chain,
)
from .experiments import (  # noqa: F401
    PacketSpec,
    dark_bic_evolution,
    decay_sweep,
    gaussian_packet,
    ipr_map,
    nonlinear_stability,
    profile_overlap,
    reflectivity,
    reflectivity_sweep,
)
