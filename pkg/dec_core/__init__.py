# DEC Core Package
# Hodge stars, dual coboundaries, Laplacians, de Rham map and discrete norms

__version__ = "1.0.0"
__author__ = "decflow developers"

from .cochain import Cochain, make_cochain, values_of
from .solvers import SparseSPDSolver, ScalarPoissonSolver
from .operators import OperatorSet, assemble_operators, hodge_stars
from .quadrature import segment_rule, triangle_rule, triangle_areas, evaluate
from .de_rham import de_rham, line_integrals
from .norms import (
    inner_product, norm_l2, norm_L2h, norm_M2, norm_H1h, norm_Linf_h, norm_rec,
)
from .hodge_probe import hodge_error_probe
from .export import export_operators, operator_matrices
from .cochain_io import write_cochain, read_cochain

__all__ = [
    'Cochain', 'make_cochain', 'values_of',
    'SparseSPDSolver', 'ScalarPoissonSolver',
    'OperatorSet', 'assemble_operators', 'hodge_stars',
    'segment_rule', 'triangle_rule', 'triangle_areas', 'evaluate',
    'de_rham', 'line_integrals',
    'inner_product', 'norm_l2', 'norm_L2h', 'norm_M2', 'norm_H1h', 'norm_Linf_h', 'norm_rec',
    'hodge_error_probe',
    'export_operators', 'operator_matrices',
    'write_cochain', 'read_cochain',
]
