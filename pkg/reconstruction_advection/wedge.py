"""
Extrusion-based wedge products.

wedge_11 pairs two dual 1-cochains into a dual 2-cochain through the face
extrusion; wedge_12 (prism complexes only) pairs a 1-cochain with a
2-cochain into a value per dual 3-cell from vertex reconstructions of both.
"""

import logging
from typing import Tuple

import numpy as np
import scipy.sparse as sp

from mesh_complex import ValidationError
from .advection import AdvectionContext

logger = logging.getLogger(__name__)


def wedge_11(ctx: AdvectionContext, alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """alpha ^ beta = 1/2 M2^-1 U~(alpha)^T beta; antisymmetric."""
    ops = ctx.ops
    return 0.5 * ctx.face_extrusion.apply_transpose(alpha, beta) / ops.M2


def _require_prism(ctx: AdvectionContext, what: str):
    cx = ctx.complex
    if cx.dimension != 3 or 'index' not in cx.extras:
        raise ValidationError(f"{what} needs a 3D prism complex", module='reconstruction_advection')
    return cx


def _vertex_one_form_matrices(ctx: AdvectionContext) -> Tuple[sp.csr_matrix, ...]:
    """a_m(alpha) per primal vertex: (n_vertices x n_dual_edges) matrices for x, y, z."""
    cx = ctx.complex
    tri = cx.layer
    ix = cx.extras['index']
    h, h_prev, h_bar = cx.heights, cx.extras['h_prev'], cx.extras['h_bar']
    L = ix.L
    n0, n1, n2 = cx.n_primal[0], cx.n_dual[1], cx.n_dual[2]
    ll = np.arange(L)[:, None]

    # vertical: kite-weighted mean of the vertical dual edges through the cell
    rows, cols, vals = [], [], []
    tris = np.arange(tri.n_triangles)[None, :]
    for loc in range(3):
        v = tri.triangles[:, loc][None, :]
        weight = tri.kite_areas[:, loc][None, :] / tri.voronoi_areas[v]
        rows.append(ix.vertex(v, ll).ravel())
        cols.append(ix.tface(tris, ll).ravel())
        vals.append((weight / h_bar[:, None]).ravel())
    a_z = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                        shape=(n0, n1))

    # horizontal: height-interpolated face reconstructions of the Voronoi faces
    fp = cx.face_pairs
    flux_x = sp.csr_matrix((fp.sign * fp.lever[:, 0], (fp.cell, fp.edge)), shape=(n2, n1))
    flux_y = sp.csr_matrix((fp.sign * fp.lever[:, 1], (fp.cell, fp.edge)), shape=(n2, n1))
    verts = np.arange(tri.n_vertices)[None, :]
    span = (h + h_prev)[:, None]
    top = ix.vedge(verts, ll)
    bottom = ix.vedge(verts, ll - 1)
    pick = sp.csr_matrix((
        np.concatenate([np.broadcast_to(h_prev[:, None] / span, top.shape).ravel() / cx.dual_areas[top.ravel()],
                        np.broadcast_to(h[:, None] / span, bottom.shape).ravel() / cx.dual_areas[bottom.ravel()]]),
        (np.tile(ix.vertex(verts, ll).ravel(), 2), np.concatenate([top.ravel(), bottom.ravel()]))),
        shape=(n0, n2))
    # z_hat x flux
    a_x = sp.csr_matrix(-(pick @ flux_y))
    a_y = sp.csr_matrix(pick @ flux_x)
    return a_x, a_y, a_z


def _vertex_two_form_matrices(ctx: AdvectionContext) -> Tuple[sp.csr_matrix, ...]:
    """b_m(beta) = (1/|K_m*|) sum_k s_km beta_k (centroid_k - x_m)."""
    cx = ctx.complex
    tri = cx.layer
    ix = cx.extras['index']
    h, h_prev = cx.heights, cx.extras['h_prev']
    L = ix.L
    n0, n2 = cx.n_primal[0], cx.n_dual[2]
    ll = np.arange(L)[:, None]
    edges = np.arange(tri.n_edges)[None, :]
    verts = np.arange(tri.n_vertices)[None, :]
    tail2, head2 = tri.edge_endpoints_in_edge_chart()
    m_star = tri.dual_midpoints
    skew = np.broadcast_to(0.25 * (h - h_prev)[:, None], (L, tri.n_edges))
    half = np.broadcast_to(0.5 * h[:, None], (L, tri.n_vertices))
    g = tri.voronoi_centroid_offsets

    blocks = (
        # rectangle faces of horizontal edges, seen from tail (+) and head (-)
        (ix.vertex(tri.edges[:, 0][None, :], ll), ix.hedge(edges, ll), 1.0, m_star - tail2, skew),
        (ix.vertex(tri.edges[:, 1][None, :], ll), ix.hedge(edges, ll), -1.0, m_star - head2, skew),
        # Voronoi faces of vertical edges: top of (v, l), bottom of (v, l+1)
        (ix.vertex(verts, ll), ix.vedge(verts, ll), 1.0, g, half),
        (ix.vertex(verts, ll + 1), ix.vedge(verts, ll), -1.0, g, -half),
    )
    rows, cols, comps = [], [], [[], [], []]
    for m, k, sign, planar, dz in blocks:
        m, k = np.broadcast_arrays(m, k)
        rows.append(m.ravel())
        cols.append(k.ravel())
        planar = np.broadcast_to(planar[None], m.shape + (2,))
        comps[0].append(sign * planar[..., 0].ravel())
        comps[1].append(sign * planar[..., 1].ravel())
        comps[2].append(sign * np.broadcast_to(dz, m.shape).ravel())
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    volume = cx.dual_measures[3][rows]
    return tuple(sp.csr_matrix((np.concatenate(c) / volume, (rows, cols)), shape=(n0, n2))
                 for c in comps)


def vertex_one_form(ctx: AdvectionContext, alpha: np.ndarray) -> np.ndarray:
    """Vector a_m per primal vertex (dual 3-cell) from a dual 1-cochain."""
    _require_prism(ctx, "vertex_one_form")
    mats = ctx.cached('vertex_one_form', lambda: _vertex_one_form_matrices(ctx))
    return np.column_stack([A @ alpha for A in mats])


def vertex_two_form(ctx: AdvectionContext, beta: np.ndarray) -> np.ndarray:
    """Vector b_m per primal vertex from the fluxes of a dual 2-cochain."""
    _require_prism(ctx, "vertex_two_form")
    mats = ctx.cached('vertex_two_form', lambda: _vertex_two_form_matrices(ctx))
    return np.column_stack([B @ beta for B in mats])


def wedge_12(ctx: AdvectionContext, alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """alpha ^ beta = |K_m*| a_m . b_m on every dual 3-cell."""
    cx = _require_prism(ctx, "wedge_12")
    a = vertex_one_form(ctx, alpha)
    b = vertex_two_form(ctx, beta)
    return cx.dual_measures[3] * np.einsum('mc,mc->m', a, b)


def three_form_contraction_matrix(ctx: AdvectionContext, v: np.ndarray) -> sp.csr_matrix:
    """C(v) with (I_v gamma)_k = A_k* 1/2 sum_m (a_m . e_k) gamma_m / |K_m*|."""
    cx = _require_prism(ctx, "three_form_contraction")
    a = vertex_one_form(ctx, v)
    D0 = cx.incidence[0].tocoo()
    edge, vertex = D0.row, D0.col
    normal_speed = np.einsum('nc,nc->n', a[vertex], cx.edge_tangents[edge])
    vals = 0.5 * cx.dual_areas[edge] * normal_speed / cx.dual_measures[3][vertex]
    return sp.csr_matrix((vals, (edge, vertex)), shape=(cx.n_dual[2], cx.n_dual[3]))


def three_form_contraction(ctx: AdvectionContext, v: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    return three_form_contraction_matrix(ctx, v) @ gamma


def leibniz_defect(ctx: AdvectionContext, alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """
    Per dual 3-cell |D~2(a ^ b) - D~1 a ^ b + a ^ D~1 b| / |K_m*|.

    D~1 a ^ b is evaluated as b ^ D~1 a (graded commutativity of a 2-form with a 1-form).
    """
    cx = _require_prism(ctx, "leibniz_defect")
    ops = ctx.ops
    lhs = ops.d2(wedge_11(ctx, alpha, beta))
    rhs = wedge_12(ctx, beta, ops.d1(alpha)) - wedge_12(ctx, alpha, ops.d1(beta))
    return np.abs(lhs - rhs) / cx.dual_measures[3]
