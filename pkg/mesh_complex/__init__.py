# Mesh Complex Package
# Delaunay–Voronoi cell complexes: torus, prism extrusion, bounded square

__version__ = "1.0.0"
__author__ = "decflow developers"

from .errors import (
    DecFlowError, ValidationError, NumericalError, MeshError, CochainMismatchError,
    ConfigError, OperatorError, SolverError, EigenError, StepRejected, IntegrationError,
)
from .triangulation import Triangulation
from .complex import CellComplex, FacePairs, DualQuadrature
from .torus import build_torus_mesh
from .square import build_square_dirichlet
from .prism import extrude_prismatic, PrismIndex
from .audit import MeshAudit, audit_mesh, dual_vertex_grams
from .mesh_io import read_mesh, write_mesh
from .loops import (
    dual_boundary, homology_cycle, horizontal_dual_cycle, homology_basis, random_dual_cycles,
)
from .factory import MeshSpec, parse_mesh_spec, build_mesh

__all__ = [
    'DecFlowError', 'ValidationError', 'NumericalError', 'MeshError', 'CochainMismatchError',
    'ConfigError', 'OperatorError', 'SolverError', 'EigenError', 'StepRejected', 'IntegrationError',
    'Triangulation', 'CellComplex', 'FacePairs', 'DualQuadrature',
    'build_torus_mesh', 'build_square_dirichlet', 'extrude_prismatic', 'PrismIndex',
    'MeshAudit', 'audit_mesh', 'dual_vertex_grams',
    'read_mesh', 'write_mesh',
    'dual_boundary', 'homology_cycle', 'horizontal_dual_cycle', 'homology_basis', 'random_dual_cycles',
    'MeshSpec', 'parse_mesh_spec', 'build_mesh',
]
