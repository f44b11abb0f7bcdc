"""Resonance fluorescence of the Jaynes-Cummings model with Stark-shifting nearby levels."""
from .core import (NearbyLevelSet, PhotonStatistics, SystemParams, coherent_distribution,
                   custom_distribution, make_distribution, thermal_distribution, vacuum)
from .dressed import (DressedQuantities, EffectiveModel, EvolutionCoeffs, dressed_quantities,
                      effective_model, evolution_coeffs, line_positions)
from .spectrum import (CorrelationAvg, SpectralLine, SpectrumResult, asymmetry_metric,
                       correlation_avg, default_grid, evaluate_spectrum, peak_find,
                       physical_spectrum, transition_lines)
from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"
