# Verification Package
# Reference solutions, convergence tables, rate studies and the identity suite

__version__ = "1.0.0"
__author__ = "decflow developers"

from .references import (
    ReferenceSolution, taylor_green_2d, taylor_green_mean_flow, smooth_mixture_2d, abc_reference_3d,
    helical_mixture_3d, no_slip_square, constant_field, affine_field, REFERENCES, build_reference,
    lie_derivative_field,
)
from .rates import MIN_RESOLUTIONS, RateFit, Expectation, fit_slope, ConvergenceTable
from .error_norms import restrict, outward_fluxes, whitney_field, whitney_l2_error, error_norms
from .truncation import (
    CASE_B_MINIMUM, family_letter, ladder_family, flow_for_reference, truncation_residual, truncation_error,
    solver_floor, truncation_study,
)
from .convergence import (
    DT_COEFFICIENT, NU_LADDER, RATE_STUDIES, family_spec, expected_rate, coupled_step, initial_velocity,
    convergence_study, nu_uniformity_study, conserved_quantity_convergence,
    time_refinement_study, hodge_rate, projection_rate, reconstruction_rate, whitney_rate,
    leibniz_rate, helicity_rate, lie_rate, pressure_study, continuum_lowest_eigenvalue,
    spectral_study, rate_study,
)
from .invariants import TOLERANCES, run_identity_suite

__all__ = [
    'ReferenceSolution', 'taylor_green_2d', 'taylor_green_mean_flow', 'smooth_mixture_2d',
    'abc_reference_3d', 'helical_mixture_3d', 'no_slip_square', 'constant_field', 'affine_field', 'REFERENCES',
    'build_reference', 'lie_derivative_field',
    'MIN_RESOLUTIONS', 'RateFit', 'Expectation', 'fit_slope', 'ConvergenceTable',
    'restrict', 'outward_fluxes', 'whitney_field', 'whitney_l2_error', 'error_norms',
    'CASE_B_MINIMUM', 'family_letter', 'ladder_family', 'flow_for_reference', 'truncation_residual',
    'truncation_error', 'solver_floor', 'truncation_study',
    'DT_COEFFICIENT', 'NU_LADDER', 'RATE_STUDIES', 'family_spec', 'expected_rate', 'coupled_step',
    'initial_velocity', 'convergence_study', 'nu_uniformity_study', 'conserved_quantity_convergence',
    'time_refinement_study', 'hodge_rate', 'projection_rate', 'reconstruction_rate', 'whitney_rate',
    'leibniz_rate', 'helicity_rate', 'lie_rate', 'pressure_study', 'continuum_lowest_eigenvalue',
    'spectral_study', 'rate_study',
    'TOLERANCES', 'run_identity_suite',
]
