"""
De Rham map R_h: integrate smooth forms over dual cells.

Field conventions (points are (N, d) arrays in unwrapped chart coordinates,
so fields must be periodic where the complex is):
  k=0  scalar f(x)            sampled at dual vertices
  k=1  vector u(x)            line integral of u . t_hat along dual edges
  k=2  2D: scalar w(x)        integral over the dual cell
       3D: vector B(x)        flux B . n through the dual face
"""

import numpy as np

from mesh_complex import CellComplex, ValidationError
from .quadrature import evaluate, segment_rule, triangle_rule


def de_rham(cx: CellComplex, field, k: int) -> np.ndarray:
    if k == 0:
        return evaluate(field, cx.dual_vertices)
    if k == 1:
        return line_integrals(field, cx.dual_segments, cx.dual_tangents)
    if k == 2:
        quad = cx.dual_quadrature
        points, weights = triangle_rule(quad.points)
        values = evaluate(field, points)
        if cx.dimension == 2:
            per_triangle = np.einsum('nq,nq->n', weights, values)
        else:
            normals = cx.dual_face_normals[quad.owner]
            per_triangle = np.einsum('nq,nqd,nd->n', weights, values, normals)
        return np.bincount(quad.owner, weights=per_triangle, minlength=cx.n_dual[2])
    raise ValidationError(f"de Rham map supports k in {{0, 1, 2}}, got {k}", module='dec_core')


def line_integrals(field, segments: np.ndarray, tangents: np.ndarray) -> np.ndarray:
    points, weights = segment_rule(segments)
    values = evaluate(field, points)
    return np.einsum('nq,nqd,nd->n', weights, values, tangents)
