"""
Discrete error norms against R_h u(t), and the Whitney L2 error in 2D.

The Whitney field is the lowest-order Raviart-Thomas reconstruction on each
primal triangle driven by the normal fluxes M1 v through its edges:

    u_T(x) = sum_i F_i (x - P_i) / (2 |T|)

with F_i the outward flux through the edge opposite vertex P_i.
"""

import logging
from typing import Dict

import numpy as np

from dec_core import OperatorSet, de_rham, norm_L2h, norm_rec, triangle_rule
from mesh_complex import CellComplex, ValidationError
from .references import ReferenceSolution

logger = logging.getLogger(__name__)


def restrict(cx: CellComplex, ref: ReferenceSolution, t: float = 0.0) -> np.ndarray:
    """R_h u(t) on dual edges."""
    return de_rham(cx, ref.velocity_field(t), 1)


def outward_fluxes(ops: OperatorSet, v: np.ndarray) -> np.ndarray:
    """(nT, 3) outward flux through the edge opposite each local vertex."""
    tri = ops.complex.layer
    flux = ops.M1 * np.asarray(v, dtype=float)
    # local edge i joins vertices (i, i+1) and is opposite vertex i+2
    edge_flux = -tri.tri_edge_orient * flux[tri.tri_edges]
    return np.roll(edge_flux, 2, axis=1)


def whitney_field(ops: OperatorSet, v: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Evaluate the Whitney field at (nT, q, 2) chart points of each triangle."""
    tri = ops.complex.layer
    F = outward_fluxes(ops, v)
    P = tri.tri_coords
    rel = points[:, :, None, :] - P[:, None, :, :]
    return np.einsum('ni,nqid->nqd', F, rel) / (2.0 * tri.tri_areas[:, None, None])


def whitney_l2_error(ops: OperatorSet, v: np.ndarray, ref: ReferenceSolution, t: float = 0.0) -> float:
    """||u(t) - W_h v||_{L2} with the degree-5 triangle rule."""
    cx = ops.complex
    if cx.dimension != 2:
        raise ValidationError("the Whitney L2 error is implemented in 2D only", module='verification')
    points, weights = triangle_rule(cx.layer.tri_coords)
    exact = ref.u(points.reshape(-1, 2), t).reshape(points.shape)
    diff = exact - whitney_field(ops, v, points)
    return float(np.sqrt(np.sum(weights * np.sum(diff ** 2, axis=-1))))


def error_norms(ops: OperatorSet, v: np.ndarray, ref: ReferenceSolution, t: float = 0.0,
                whitney: bool = True) -> Dict[str, float]:
    """Discrete L2h and rec-norm errors against R_h u(t); Whitney L2 in 2D on request."""
    exact = restrict(ops.complex, ref, t)
    diff = np.asarray(v, dtype=float) - exact
    out = {
        'L2h': norm_L2h(ops, diff, 1),
        'rec': norm_rec(ops, diff),
    }
    if whitney:
        out['whitney_L2'] = whitney_l2_error(ops, v, ref, t)
    return out
