# Reconstruction & Advection Package
# Gram reconstruction, extrusion, contraction, Lamb form, wedge products, Lie derivatives

__version__ = "1.0.0"
__author__ = "decflow developers"

from .reconstruction import (
    ReconstructionContext, build_reconstruction, reconstruct_velocity,
    one_form_contraction, contraction_matrix, kinetic_energy_density,
)
from .extrusion import Extrusion, EXTRUSION_VARIANTS, build_extrusion, face_velocity
from .advection import (
    AdvectionContext, build_advection, extrusion_matrix, contraction, linear_contraction,
    lamb_bilinear, lamb_vector, trilinear, polarised_residual, polarised_two_residual,
    energy_identity_residual,
)
from .wedge import (
    wedge_11, wedge_12, vertex_one_form, vertex_two_form, three_form_contraction,
    three_form_contraction_matrix, leibniz_defect,
)
from .lie import lie_matrix, lie_derivative, chain_lie, advect_loop, boundary_defect

__all__ = [
    'ReconstructionContext', 'build_reconstruction', 'reconstruct_velocity',
    'one_form_contraction', 'contraction_matrix', 'kinetic_energy_density',
    'Extrusion', 'EXTRUSION_VARIANTS', 'build_extrusion', 'face_velocity',
    'AdvectionContext', 'build_advection', 'extrusion_matrix', 'contraction', 'linear_contraction',
    'lamb_bilinear', 'lamb_vector', 'trilinear', 'polarised_residual', 'polarised_two_residual',
    'energy_identity_residual',
    'wedge_11', 'wedge_12', 'vertex_one_form', 'vertex_two_form', 'three_form_contraction',
    'three_form_contraction_matrix', 'leibniz_defect',
    'lie_matrix', 'lie_derivative', 'chain_lie', 'advect_loop', 'boundary_defect',
]
