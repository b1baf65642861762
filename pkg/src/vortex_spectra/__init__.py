"""Quantized circulation spectra of a closed vortex filament in a pipe.

The package covers Bessel zeros, the tangent-field model of a perturbed
vortex ring, its closed-form and numerical dynamics, and the enumeration
of circulation and energy spectra.
"""

__version__ = "0.1.0"

from .bessel import BesselZeroTable, bessel_j, bessel_j_prime, bessel_zero, mcmahon_zero
from .constants import DerivedScales, PhysicalConstants, PhysicsWarning, PipeDomain, derive_scales, validate_domain
from .dynamics import (
    PhaseState,
    angular_momentum_from_filament,
    evolve_closed,
    evolve_numeric,
    hamiltonian,
    momentum_from_filament,
)
from .errors import (
    ConstraintError,
    DomainError,
    IndexOutOfRange,
    ModelRegimeError,
    ResourceError,
    ValidationError,
    VortexSpectraError,
)
from .filament import FilamentCurve, TangentField, closure_defect, reconstruct_curve, synthesize_tangent
from .modes import DispersionLaw, dispersion, mirror_amplitude, reflection_coefficient
from .spectrum import (
    CirculationMode,
    Cutoffs,
    ExcitationState,
    SpectralLine,
    Spectrum,
    circulation,
    circulation_gap,
    energy_conditional,
    energy_real,
    enumerate_spectrum,
    gamma_bounds,
    regge_trajectory,
)

__all__ = [name for name in dir() if not name.startswith("_")]
