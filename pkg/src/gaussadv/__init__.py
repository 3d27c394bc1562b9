"""Metrological advantage of isotropic two-mode Gaussian states in Mach-Zehnder phase estimation."""

__version__ = "0.1.0"

from .gaussian import (  # noqa: E402
    AnisotropicStateError,
    IsotropicGaussianParams,
    NonPhysicalStateError,
    PhaseSpaceState,
    SymplecticMatrix,
    build_state,
    extract_params,
    mean_photon_number,
    purity,
    symplectic_eigenvalues,
    symplectic_factory,
)
from .qfi import advantage_gap, auxiliary_params, ftql, qfi_jy, xyz  # noqa: E402
from .plo import (  # noqa: E402
    PLOAngles,
    Theorem1Certificate,
    apply_plo,
    canonical_map,
    optimize_qfi,
    theorem1_strategy,
)
from .advantage import (  # noqa: E402
    OneModeParams,
    SpecialFamilyParams,
    metrological_advantage,
    renormalized_advantage,
)

__all__ = [
    "__version__",
    "AnisotropicStateError",
    "IsotropicGaussianParams",
    "NonPhysicalStateError",
    "PhaseSpaceState",
    "SymplecticMatrix",
    "build_state",
    "extract_params",
    "mean_photon_number",
    "purity",
    "symplectic_eigenvalues",
    "symplectic_factory",
    "advantage_gap",
    "auxiliary_params",
    "ftql",
    "qfi_jy",
    "xyz",
    "PLOAngles",
    "Theorem1Certificate",
    "apply_plo",
    "canonical_map",
    "optimize_qfi",
    "theorem1_strategy",
    "OneModeParams",
    "SpecialFamilyParams",
    "metrological_advantage",
    "renormalized_advantage",
]
