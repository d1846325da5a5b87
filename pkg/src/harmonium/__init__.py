"""Closed-form entanglement measures of the N-particle harmonium.

Bosons (three dimensions) get the von Neumann entropy of the one-body
quasidensity; spinless and closed-shell spinned fermions (one dimension) get
purity and linear entropy of the one-body density matrix.  ``oracle`` holds
independent quadrature and kernel-diagonalization checks.
"""
from .errors import (
    ConvergenceWarning,
    DegreeTooLarge,
    DivergentIntegral,
    DomainError,
    HarmoniumError,
    NoInteriorMaximum,
    UnboundSystem,
)
from .model import (
    Frequencies,
    ModelParams,
    boson_ground_energy,
    fermion_spinless_ground_energy,
    fermion_spinned_ground_energy,
    frequencies,
    ratio_from_energy,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceWarning",
    "DegreeTooLarge",
    "DivergentIntegral",
    "DomainError",
    "Frequencies",
    "HarmoniumError",
    "ModelParams",
    "NoInteriorMaximum",
    "UnboundSystem",
    "boson_ground_energy",
    "fermion_spinless_ground_energy",
    "fermion_spinned_ground_energy",
    "frequencies",
    "ratio_from_energy",
    "__version__",
]
