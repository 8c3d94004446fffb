"""Conditional phase shifts between counter-propagating Rydberg slow-light polaritons."""

from .collision import (
    PhaseResult,
    PulseEnvelope,
    TwoParticleGrid,
    closed_form_phase,
    evolve_two_particle,
    homogeneity_metric,
    phase_bound,
    phase_shift,
    schmidt_number,
    schmidt_spectrum,
)
from .eit import DerivedEit, FeasibilityReport, MediumConfig, derive_eit, feasibility, fidelity
from .numerics import QuadratureResult, erfcx, integrate_adaptive
from .potential import dd_potential_1d, dd_shift_3d, reduced_potential, reduced_potential_integral
from .rydberg import RydbergSpec, make_rydberg

__version__ = "0.1.0"
