"""
Hodge-star consistency probe.

For each primal cell sigma compares the star applied to the de Rham cochain,
(M_k R_h alpha)_sigma, with the exact dual flux integrated over sigma itself,
and normalizes by the primal cell measure.
"""

import logging

import numpy as np

from mesh_complex import CellComplex, ValidationError
from .de_rham import de_rham
from .operators import hodge_stars
from .quadrature import SEGMENT_NODES, SEGMENT_WEIGHTS, evaluate, segment_rule, triangle_rule

logger = logging.getLogger(__name__)


def _lift(points2, z):
    z = np.broadcast_to(np.asarray(z, dtype=float), points2.shape[:-1])
    return np.concatenate([points2, z[..., None]], axis=-1)


def _primal_edges(cx: CellComplex) -> np.ndarray:
    tri = cx.layer
    tails, heads = tri.edge_endpoints_in_edge_chart()
    if cx.dimension == 2:
        return np.stack([tails, heads], axis=1)
    z, h = cx.extras['z'], cx.heights
    L, nV = len(h), tri.n_vertices
    horiz = np.stack([_lift(np.broadcast_to(tails[None], (L,) + tails.shape), z[:, None]),
                      _lift(np.broadcast_to(heads[None], (L,) + heads.shape), z[:, None])],
                     axis=2).reshape(-1, 2, 3)
    verts = np.broadcast_to(tri.vertices[None], (L, nV, 2))
    vert = np.stack([_lift(verts, z[:, None]), _lift(verts, (z + h)[:, None])],
                    axis=2).reshape(-1, 2, 3)
    return np.concatenate([horiz, vert])


def _face_fluxes(cx: CellComplex, field) -> np.ndarray:
    """Integral of u . t_hat_j over every primal (d-1)-cell j."""
    tri = cx.layer
    if cx.dimension == 2:
        segs = _primal_edges(cx)
        points, weights = segment_rule(segs)
        values = evaluate(field, points)
        return np.einsum('nq,nqd,nd->n', weights, values, cx.dual_tangents)

    z, h = cx.extras['z'], cx.heights
    L, nT, nE = len(h), tri.n_triangles, tri.n_edges
    tris = _lift(np.broadcast_to(tri.tri_coords[None], (L, nT, 3, 2)),
                 np.broadcast_to(z[:, None, None], (L, nT, 3))).reshape(-1, 3, 3)
    points, weights = triangle_rule(tris)
    values = evaluate(field, points)
    flux_t = np.einsum('nq,nq->n', weights, values[..., 2])

    segs = _primal_edges(cx)[:L * nE]
    seg_points, seg_weights = segment_rule(segs)
    # tensor rule: along the edge x vertical extent of the layer
    dz = np.repeat(h, nE)
    pts = seg_points[:, :, None, :] + np.zeros(3)
    pts = np.broadcast_to(pts, seg_points.shape[:2] + (SEGMENT_NODES.size, 3)).copy()
    pts[..., 2] += dz[:, None, None] * SEGMENT_NODES[None, None, :]
    w = seg_weights[:, :, None] * (dz[:, None, None] * SEGMENT_WEIGHTS[None, None, :])
    vals = evaluate(field, pts)
    normals = cx.dual_tangents[L * nT:]
    flux_q = np.einsum('nab,nabd,nd->n', w, vals, normals)
    return np.concatenate([flux_t, flux_q])


def _cell_integrals(cx: CellComplex, field) -> np.ndarray:
    tri = cx.layer
    points, weights = triangle_rule(tri.tri_coords)
    if cx.dimension == 2:
        return np.einsum('nq,nq->n', weights, evaluate(field, points))
    z, h = cx.extras['z'], cx.heights
    out = []
    for l in range(len(h)):
        zs = z[l] + h[l] * SEGMENT_NODES
        total = np.zeros(tri.n_triangles)
        for zq, wq in zip(zs, h[l] * SEGMENT_WEIGHTS):
            total += wq * np.einsum('nq,nq->n', weights, evaluate(field, _lift(points, zq)))
        out.append(total)
    return np.concatenate(out)


def hodge_error_probe(cx: CellComplex, field, k: int) -> np.ndarray:
    """
    Per-primal-cell normalized Hodge error |(M_k R_h a) - (exact dual flux)| / |sigma|.

    k=0: scalar field, primal top cells.  k=1: vector field, primal (d-1)-cells.
    k=2: 2D scalar vorticity at primal vertices; 3D vector field on primal edges.
    """
    stars = hodge_stars(cx)
    d = cx.dimension
    measure = cx.primal_measures[d - k] if k < d else np.ones(cx.n_primal[0])
    discrete = stars[k] * de_rham(cx, field, k)
    if k == 0:
        exact = _cell_integrals(cx, field)
    elif k == 1:
        exact = _face_fluxes(cx, field)
    elif k == 2 and d == 2:
        exact = evaluate(field, cx.layer.vertices)
    elif k == 2:
        exact_segments = _primal_edges(cx)
        points, weights = segment_rule(exact_segments)
        values = evaluate(field, points)
        exact = np.einsum('nq,nqd,nd->n', weights, values, cx.edge_tangents)
    else:
        raise ValidationError(f"Hodge probe supports k in {{0, 1, 2}}, got {k}", module='dec_core')
    errors = np.abs(discrete - exact) / measure
    logger.info("|-- [OK] Hodge probe k=%d: max normalized error %.3e", k, errors.max())
    return errors
