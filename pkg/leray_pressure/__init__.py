# Leray & Pressure Package
# Helmholtz-Leray projection, harmonic cochains, spectral constants, pressure recovery

__version__ = "1.0.0"
__author__ = "decflow developers"

from .leray import (
    LerayContext, build_leray, leray_project, leray_project_dirichlet, gradient_part,
    divergence_residual,
)
from .spectral import (
    EigenResult, HarmonicBasis, subspace_iteration, expected_harmonic_dimension,
    harmonic_basis, poincare_constant, infsup_constant, infsup_quotients,
)
from .pressure import pressure_recover, pressure_mean

__all__ = [
    'LerayContext', 'build_leray', 'leray_project', 'leray_project_dirichlet', 'gradient_part',
    'divergence_residual',
    'EigenResult', 'HarmonicBasis', 'subspace_iteration', 'expected_harmonic_dimension',
    'harmonic_basis', 'poincare_constant', 'infsup_constant', 'infsup_quotients',
    'pressure_recover', 'pressure_mean',
]
