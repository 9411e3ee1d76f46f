"""Stochastic day-step outbreak simulation on a contact structure."""
from ._kernels import HAVE_NUMBA, default_backend
from .engine import Distribution, EnsembleSummary, derive_seed, ensemble, simulate
from .model import (ContactStructure, Disposition, Intervention, InterventionKind,
                    OutbreakResult, ScheduledTravel, SimConfig, SimParams)

__all__ = [
    "ContactStructure", "Disposition", "Distribution", "EnsembleSummary", "HAVE_NUMBA",
    "Intervention", "InterventionKind", "OutbreakResult", "ScheduledTravel", "SimConfig",
    "SimParams", "default_backend", "derive_seed", "ensemble", "simulate",
]
