"""
CellComplex: the primal/dual Delaunay–Voronoi complex consumed by every other
package.

Indexing follows the dual degree k used by the cochains:
  dual 0-cells  <-> primal d-cells   (dual vertices = circumcentres)
  dual 1-cells  <-> primal (d-1)-cells
  dual 2-cells  <-> primal (d-2)-cells
  dual 3-cells  <-> primal vertices (3D only)

`incidence[k]` is the primal coboundary D_k (shape n_{k+1} x n_k) and
`dual_incidence[k]` the dual coboundary D~_k (shape m_{k+1} x m_k, m_k the
number of dual k-cells). Both are integer matrices.
"""

import hashlib
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from .errors import MeshError
from .triangulation import Triangulation

logger = logging.getLogger(__name__)

ORTHOGONALITY_TOL = 1e-10


@dataclass(frozen=True)
class FacePairs:
    """
    Nonzeros of D~_1 with their geometric levers.

    For each (dual 2-cell k, dual edge j) pair: sign sigma = D~_1[k, j] and
    lever = (midpoint of dual edge j) - (reference point of k), where the
    reference point is the primal vertex (2D) or primal edge midpoint (3D).
    """
    cell: np.ndarray
    edge: np.ndarray
    sign: np.ndarray
    lever: np.ndarray


@dataclass(frozen=True)
class DualQuadrature:
    """Triangles tiling every dual 2-cell, with the owning cell index."""
    points: np.ndarray
    owner: np.ndarray


@dataclass(frozen=True, eq=False)
class CellComplex:
    dimension: int
    kind: str
    family: str
    vertices: np.ndarray
    periods: Optional[np.ndarray]
    incidence: Tuple[sp.csr_matrix, ...]
    dual_incidence: Tuple[sp.csr_matrix, ...]
    primal_measures: Tuple[np.ndarray, ...]
    dual_measures: Tuple[np.ndarray, ...]
    dual_vertices: np.ndarray
    edge_tangents: np.ndarray
    dual_segments: np.ndarray
    dual_tangents: np.ndarray
    dual_face_normals: np.ndarray
    face_pairs: FacePairs
    dual_quadrature: DualQuadrature
    dual_face_centroid_offsets: np.ndarray
    dual_edge_centroid_offsets: np.ndarray
    dual_boundary_mask: np.ndarray
    layer: Triangulation
    heights: Optional[np.ndarray] = None
    extras: Dict[str, object] = field(default_factory=dict)

    # ------------------------------------------------------------------
    @property
    def n_dual(self) -> Tuple[int, ...]:
        return tuple(m.shape[0] for m in self.dual_measures)

    @property
    def n_primal(self) -> Tuple[int, ...]:
        return tuple(m.shape[0] for m in self.primal_measures)

    @property
    def is_periodic(self) -> bool:
        return self.periods is not None

    @property
    def is_bounded(self) -> bool:
        return self.kind == 'square'

    @property
    def dual_lengths(self) -> np.ndarray:
        return self.dual_measures[1]

    @property
    def dual_areas(self) -> np.ndarray:
        return self.dual_measures[2]

    @property
    def h(self) -> float:
        return float(self.dual_lengths.max())

    @property
    def euler_characteristic(self) -> int:
        return int(sum((-1) ** k * n for k, n in enumerate(self.n_primal)))

    @property
    def tag(self) -> str:
        """Deterministic fingerprint binding cochains to this complex."""
        cached = self.extras.get('_tag')
        if cached is None:
            digest = hashlib.sha256()
            digest.update(f"{self.kind}:{self.family}:{self.dimension}".encode())
            digest.update(np.ascontiguousarray(self.vertices).tobytes())
            for mat in self.incidence:
                coo = mat.tocoo()
                digest.update(np.ascontiguousarray(coo.row).tobytes())
                digest.update(np.ascontiguousarray(coo.col).tobytes())
                digest.update(np.ascontiguousarray(coo.data).tobytes())
            if self.heights is not None:
                digest.update(np.ascontiguousarray(self.heights).tobytes())
            cached = digest.hexdigest()[:16]
            self.extras['_tag'] = cached
        return cached

    def describe(self) -> Dict[str, object]:
        return {
            'kind': self.kind,
            'family': self.family,
            'dimension': self.dimension,
            'primal_counts': list(self.n_primal),
            'dual_counts': list(self.n_dual),
            'euler_characteristic': self.euler_characteristic,
            'h': self.h,
            'tag': self.tag,
        }

    def check_chain_property(self) -> None:
        for k in range(len(self.incidence) - 1):
            if (self.incidence[k + 1] @ self.incidence[k]).count_nonzero():
                raise MeshError(f"D_{k + 1} D_{k} != 0")
            if (self.dual_incidence[k + 1] @ self.dual_incidence[k]).count_nonzero():
                raise MeshError(f"dual D_{k + 1} D_{k} != 0")


# ----------------------------------------------------------------------
# 2D assembly
# ----------------------------------------------------------------------
def complex_from_triangulation(tri: Triangulation, kind: str, family: str,
                               extras: Optional[Dict[str, object]] = None) -> CellComplex:
    """Wrap a planar triangulation as a 2D CellComplex (torus or bounded)."""
    validate_triangulation(tri)

    D0, D1 = tri.D0, tri.D1
    dual_incidence = (D1.T.tocsr(), (-D0.T).tocsr())

    tails, heads = tri.edge_endpoints_in_edge_chart()
    mids = tri.dual_midpoints
    n_edges = tri.n_edges
    face_pairs = FacePairs(
        cell=np.concatenate([tri.edges[:, 0], tri.edges[:, 1]]),
        edge=np.concatenate([np.arange(n_edges), np.arange(n_edges)]),
        sign=np.concatenate([np.ones(n_edges), -np.ones(n_edges)]),
        lever=np.concatenate([mids - tails, mids - heads]),
    )

    # out-of-plane unit normal z_hat for every Voronoi cell
    normals = np.ones(tri.n_vertices)
    boundary = tri.boundary_edges.copy() if kind == 'square' else np.zeros(n_edges, dtype=bool)

    cx = CellComplex(
        dimension=2,
        kind=kind,
        family=family,
        vertices=tri.vertices,
        periods=tri.periods,
        incidence=(D0, D1),
        dual_incidence=dual_incidence,
        primal_measures=(np.ones(tri.n_vertices), tri.edge_lengths, tri.tri_areas),
        dual_measures=(np.ones(tri.n_triangles), tri.dual_lengths, tri.voronoi_areas),
        dual_vertices=tri.dual_vertex_positions(),
        edge_tangents=tri.edge_tangents,
        dual_segments=tri.dual_segments,
        dual_tangents=tri.dual_tangents,
        dual_face_normals=normals,
        face_pairs=face_pairs,
        dual_quadrature=DualQuadrature(points=tri.refinement_points, owner=tri.refinement_owner),
        dual_face_centroid_offsets=tri.voronoi_centroid_offsets,
        dual_edge_centroid_offsets=mids - tri.edge_midpoints,
        dual_boundary_mask=boundary,
        layer=tri,
        extras=dict(extras or {}),
    )
    cx.check_chain_property()
    logger.info("[INFO] Built %s/%s complex: V=%d E=%d F=%d, h=%.4g",
                kind, family, tri.n_vertices, tri.n_edges, tri.n_triangles, cx.h)
    return cx


def validate_triangulation(tri: Triangulation) -> None:
    """Well-centredness and orthogonality gate applied to every generated mesh."""
    h = tri.dual_lengths.max()
    worst = tri.margins.min()
    if worst < 1e-12 * h:
        raise MeshError(f"circumcentre containment margin {worst / h:.3e} h below 1e-12 h "
                        "(obtuse or right triangle)")
    seg = tri.dual_segments[:, 1] - tri.dual_segments[:, 0]
    residual = np.abs(np.einsum('ij,ij->i', seg, tri.edge_tangents)) / tri.dual_lengths
    if residual.max() > ORTHOGONALITY_TOL:
        raise MeshError(f"dual edges not orthogonal to primal edges (residual {residual.max():.3e})")
    along = np.einsum('ij,ij->i', seg, tri.dual_tangents)
    if np.any(along <= 0.0):
        raise MeshError("dual edge reversed against its tangent")
