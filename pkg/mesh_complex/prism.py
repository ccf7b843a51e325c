"""
Prismatic extrusion of a periodic triangle layer into a 3D periodic complex.

Cells of the extruded complex are indexed layer-major:

  vertices      (v, l)  ->  l*nV + v
  horiz. edges  (e, l)  ->  l*nE + e
  vert. edges   (v, l)  ->  L*nE + l*nV + v          runs (v, l) -> (v, l+1)
  triangles     (T, l)  ->  l*nT + T                 at height z_l
  quads         (e, l)  ->  L*nT + l*nE + e          normal e_hat x z_hat
  prisms        (T, l)  ->  l*nT + T

Dual coboundaries: D~0 = -D2^T, D~1 = +D1^T, D~2 = -D0^T.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .complex import CellComplex, DualQuadrature, FacePairs
from .errors import MeshError
from .triangulation import LOCAL_EDGES

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PrismIndex:
    nV: int
    nE: int
    nT: int
    L: int

    def vertex(self, v, l):
        return np.asarray(l) % self.L * self.nV + v

    def hedge(self, e, l):
        return np.asarray(l) % self.L * self.nE + e

    def vedge(self, v, l):
        return self.L * self.nE + np.asarray(l) % self.L * self.nV + v

    def tface(self, T, l):
        return np.asarray(l) % self.L * self.nT + T

    def qface(self, e, l):
        return self.L * self.nT + np.asarray(l) % self.L * self.nE + e

    def cell(self, T, l):
        return np.asarray(l) % self.L * self.nT + T

    @property
    def counts(self):
        L = self.L
        return (self.nV * L, (self.nE + self.nV) * L, (self.nT + self.nE) * L, self.nT * L)


def _lift(points2: np.ndarray, z) -> np.ndarray:
    z = np.broadcast_to(np.asarray(z, dtype=float), points2.shape[:-1])
    return np.concatenate([points2, z[..., None]], axis=-1)


def _coo(rows, cols, vals, shape) -> sp.csr_matrix:
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                         shape=shape, dtype=np.int64)


def extrude_prismatic(layer: CellComplex, n_layers: int,
                      heights: Optional[Sequence[float]] = None,
                      depth: float = 2.0 * np.pi) -> CellComplex:
    """
    Extrude a 2D torus complex into n_layers prism layers.

    `heights` defaults to uniform layers of total `depth`; uniform heights make
    the vertical centroid proximity exact.
    """
    if layer.dimension != 2:
        raise MeshError(f"extrusion needs a 2D layer complex, got dimension {layer.dimension}")
    if not layer.is_periodic:
        raise MeshError("extrusion is only defined for periodic layers")
    if n_layers < 2:
        raise MeshError(f"extrusion needs n_layers >= 2, got {n_layers}")
    if heights is None:
        heights = np.full(n_layers, depth / n_layers)
    h = np.asarray(heights, dtype=float)
    if h.shape != (n_layers,):
        raise MeshError(f"expected {n_layers} layer heights, got {h.size}")
    if np.any(h <= 0.0) or not np.all(np.isfinite(h)):
        raise MeshError("layer heights must be positive and finite")

    tri = layer.layer
    L = n_layers
    ix = PrismIndex(tri.n_vertices, tri.n_edges, tri.n_triangles, L)
    nV, nE, nT = ix.nV, ix.nE, ix.nT
    n0, n1, n2, n3 = ix.counts
    logger.info("[INFO] Extruding %d-triangle layer into %d prism layers", nT, L)

    z = np.concatenate([[0.0], np.cumsum(h)[:-1]])
    h_prev = np.roll(h, 1)
    h_bar = 0.5 * (h + h_prev)
    lz = float(h.sum())
    periods = np.array([layer.periods[0], layer.periods[1], lz])

    ll = np.arange(L)[:, None]
    verts = np.arange(nV)[None, :]
    edges = np.arange(nE)[None, :]
    tris = np.arange(nT)[None, :]
    tails = tri.edges[:, 0][None, :]
    heads = tri.edges[:, 1][None, :]

    # -- primal incidences -------------------------------------------
    one_h = np.ones((L, nE), dtype=np.int64)
    one_v = np.ones((L, nV), dtype=np.int64)
    D0 = _coo(
        rows=[ix.hedge(edges, ll).ravel(), ix.hedge(edges, ll).ravel(),
              ix.vedge(verts, ll).ravel(), ix.vedge(verts, ll).ravel()],
        cols=[ix.vertex(tails, ll).ravel(), ix.vertex(heads, ll).ravel(),
              ix.vertex(verts, ll).ravel(), ix.vertex(verts, ll + 1).ravel()],
        vals=[-one_h.ravel(), one_h.ravel(), -one_v.ravel(), one_v.ravel()],
        shape=(n1, n0))

    tri_rows, tri_cols, tri_vals = [], [], []
    cell_rows, cell_cols, cell_vals = [], [], []
    for i in range(3):
        e_i = tri.tri_edges[:, i][None, :]
        o_i = np.broadcast_to(tri.tri_edge_orient[:, i][None, :], (L, nT))
        tri_rows.append(ix.tface(tris, ll).ravel())
        tri_cols.append(ix.hedge(e_i, ll).ravel())
        tri_vals.append(o_i.ravel())
        cell_rows.append(ix.cell(tris, ll).ravel())
        cell_cols.append(ix.qface(e_i, ll).ravel())
        cell_vals.append(o_i.ravel())

    quad = ix.qface(edges, ll).ravel()
    D1 = _coo(
        rows=tri_rows + [quad] * 4,
        cols=tri_cols + [ix.hedge(edges, ll).ravel(), ix.vedge(heads, ll).ravel(),
                         ix.hedge(edges, ll + 1).ravel(), ix.vedge(tails, ll).ravel()],
        vals=tri_vals + [one_h.ravel(), one_h.ravel(), -one_h.ravel(), -one_h.ravel()],
        shape=(n2, n1))

    one_t = np.ones(L * nT, dtype=np.int64)
    D2 = _coo(
        rows=cell_rows + [ix.cell(tris, ll).ravel()] * 2,
        cols=cell_cols + [ix.tface(tris, ll + 1).ravel(), ix.tface(tris, ll).ravel()],
        vals=cell_vals + [one_t, -one_t],
        shape=(n3, n2))

    dual_incidence = ((-D2.T).tocsr(), D1.T.tocsr(), (-D0.T).tocsr())

    # -- measures -------------------------------------------------------
    ell, ell_star = tri.edge_lengths, tri.dual_lengths
    area, vor = tri.tri_areas, tri.voronoi_areas
    primal_measures = (
        np.ones(n0),
        np.concatenate([np.tile(ell, L), np.repeat(h, nV)]),
        np.concatenate([np.tile(area, L), np.outer(h, ell).ravel()]),
        np.outer(h, area).ravel(),
    )
    dual_measures = (
        np.ones(n3),
        np.concatenate([np.repeat(h_bar, nT), np.tile(ell_star, L)]),
        np.concatenate([np.outer(h_bar, ell_star).ravel(), np.tile(vor, L)]),
        np.outer(h_bar, vor).ravel(),
    )

    # -- dual geometry --------------------------------------------------
    z_col = z[:, None]
    h_col = h[:, None]
    hp_col = h_prev[:, None]
    skew = 0.25 * (h - h_prev)[:, None]

    cc = tri.circumcentres[None, :, :]
    dual_vertices = _lift(np.broadcast_to(cc, (L, nT, 2)), z_col + 0.5 * h_col).reshape(-1, 3)

    tangents2 = np.broadcast_to(tri.edge_tangents[None], (L, nE, 2))
    edge_tangents = np.concatenate([
        _lift(tangents2, 0.0).reshape(-1, 3),
        np.tile([0.0, 0.0, 1.0], (n1 - L * nE, 1)),
    ])

    seg2 = tri.dual_segments
    tri_seg = np.stack([
        _lift(np.broadcast_to(cc, (L, nT, 2)), z_col - 0.5 * hp_col),
        _lift(np.broadcast_to(cc, (L, nT, 2)), z_col + 0.5 * h_col),
    ], axis=2).reshape(-1, 2, 3)
    zq = np.broadcast_to(z_col + 0.5 * h_col, (L, nE))
    quad_seg = np.stack([
        _lift(np.broadcast_to(seg2[None, :, 1], (L, nE, 2)), zq),
        _lift(np.broadcast_to(seg2[None, :, 0], (L, nE, 2)), zq),
    ], axis=2).reshape(-1, 2, 3)
    dual_segments = np.concatenate([tri_seg, quad_seg])

    quad_t = np.column_stack([-tri.edge_normals, np.zeros(nE)])
    dual_tangents = np.concatenate([np.tile([0.0, 0.0, 1.0], (L * nT, 1)), np.tile(quad_t, (L, 1))])
    dual_face_normals = edge_tangents.copy()

    # -- face pairs (dual face k = primal edge, dual edge j = primal face)
    cells, dedges, signs, levers = [], [], [], []
    for i, (i0, i1) in enumerate(LOCAL_EDGES):
        mid = 0.5 * (tri.tri_coords[:, i0] + tri.tri_coords[:, i1])
        planar = np.broadcast_to((tri.circumcentres - mid)[None], (L, nT, 2))
        cells.append(ix.hedge(tri.tri_edges[:, i][None, :], ll).ravel())
        dedges.append(ix.tface(tris, ll).ravel())
        signs.append(np.broadcast_to(tri.tri_edge_orient[:, i][None, :], (L, nT)).ravel())
        levers.append(_lift(planar, np.broadcast_to(skew, (L, nT))).reshape(-1, 3))

    m_star = tri.dual_midpoints
    tail2, head2 = tri.edge_endpoints_in_edge_chart()
    half = np.broadcast_to(0.5 * h_col, (L, nE))
    for k_ids, sign, planar, dz in (
            (ix.hedge(edges, ll), 1, m_star - tri.edge_midpoints, half),
            (ix.hedge(edges, ll + 1), -1, m_star - tri.edge_midpoints, -half),
            (ix.vedge(heads, ll), 1, m_star - head2, 0.0),
            (ix.vedge(tails, ll), -1, m_star - tail2, 0.0)):
        cells.append(k_ids.ravel())
        dedges.append(quad)
        signs.append(np.full(L * nE, sign))
        levers.append(_lift(np.broadcast_to(planar[None], (L, nE, 2)), dz).reshape(-1, 3))

    face_pairs = FacePairs(
        cell=np.concatenate(cells).astype(np.int64),
        edge=np.concatenate(dedges).astype(np.int64),
        sign=np.concatenate(signs).astype(float),
        lever=np.concatenate(levers),
    )

    # -- dual-face quadrature triangles --------------------------------
    zlo = np.broadcast_to(z_col - 0.5 * hp_col, (L, nE))
    zhi = np.broadcast_to(z_col + 0.5 * h_col, (L, nE))
    s0 = np.broadcast_to(seg2[None, :, 0], (L, nE, 2))
    s1 = np.broadcast_to(seg2[None, :, 1], (L, nE, 2))
    p0, p1, p2, p3 = _lift(s0, zlo), _lift(s1, zlo), _lift(s1, zhi), _lift(s0, zhi)
    rect = np.concatenate([
        np.stack([p0, p1, p2], axis=2).reshape(-1, 3, 3),
        np.stack([p0, p2, p3], axis=2).reshape(-1, 3, 3),
    ])
    rect_owner = np.tile(ix.hedge(edges, ll).ravel(), 2)

    ref = tri.refinement_points
    nq = ref.shape[0]
    lifted = _lift(np.broadcast_to(ref[None], (L, nq, 3, 2)),
                   np.broadcast_to((z + 0.5 * h)[:, None, None], (L, nq, 3)))
    vor_owner = ix.vedge(tri.refinement_owner[None, :], ll).ravel()
    quadrature = DualQuadrature(points=np.concatenate([rect, lifted.reshape(-1, 3, 3)]),
                                owner=np.concatenate([rect_owner, vor_owner]))

    # -- centroid offsets (audit) ---------------------------------------
    face_offsets = np.concatenate([
        _lift(np.broadcast_to((m_star - tri.edge_midpoints)[None], (L, nE, 2)),
              np.broadcast_to(skew, (L, nE))).reshape(-1, 3),
        _lift(np.broadcast_to(tri.voronoi_centroid_offsets[None], (L, nV, 2)), 0.0).reshape(-1, 3),
    ])
    edge_offsets = np.concatenate([
        _lift(np.broadcast_to((tri.circumcentres - tri.tri_centroids)[None], (L, nT, 2)),
              np.broadcast_to(skew, (L, nT))).reshape(-1, 3),
        _lift(np.broadcast_to((m_star - tri.edge_midpoints)[None], (L, nE, 2)), 0.0).reshape(-1, 3),
    ])

    vertices = _lift(np.broadcast_to(tri.vertices[None], (L, nV, 2)),
                     np.broadcast_to(z_col, (L, nV))).reshape(-1, 3)

    extras = dict(layer.extras)
    extras.pop('_tag', None)
    extras.update({'n_layers': L, 'index': ix, 'z': z, 'h_prev': h_prev, 'h_bar': h_bar})

    cx = CellComplex(
        dimension=3,
        kind='prism',
        family=layer.family,
        vertices=vertices,
        periods=periods,
        incidence=(D0, D1, D2),
        dual_incidence=dual_incidence,
        primal_measures=primal_measures,
        dual_measures=dual_measures,
        dual_vertices=dual_vertices,
        edge_tangents=edge_tangents,
        dual_segments=dual_segments,
        dual_tangents=dual_tangents,
        dual_face_normals=dual_face_normals,
        face_pairs=face_pairs,
        dual_quadrature=quadrature,
        dual_face_centroid_offsets=face_offsets,
        dual_edge_centroid_offsets=edge_offsets,
        dual_boundary_mask=np.zeros(n2, dtype=bool),
        layer=tri,
        heights=h,
        extras=extras,
    )
    cx.check_chain_property()
    logger.info("|-- [OK] Prism complex: V=%d E=%d F=%d C=%d", n0, n1, n2, n3)
    return cx
