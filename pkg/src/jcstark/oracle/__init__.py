"""Brute-force truncated-Hilbert-space oracle for the analytic pipeline."""
from .checks import (CheckResult, EigensystemReport, RotationReport, check_commutator,
                     check_evolution_coeffs, check_unitarity, relative_commutator,
                     select_hse_convention, verify_eigensystem, verify_rotation_reduction)
from .dynamics import (AverageConfig, AveragedCorrelation, Propagator, TauQuadrature,
                       average_correlation, correlation_numeric, effective_numeric_spectrum,
                       full_model_spectrum, initial_density, spectrum_numeric, tau_quadrature,
                       time_average_numeric)
from .hamiltonians import (build_full_hamiltonian, build_h_script, build_hse,
                           build_rotated_hamiltonian, rotation_generator, rotation_operator)
from .operators import OperatorSet, build_operators
