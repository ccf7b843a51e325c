"""
Planar triangulation layer.

Assembles edges, incidences and the circumcentric dual geometry of a triangle
mesh, periodic or bounded. Everything geometric is computed in per-cell charts
(unwrapped coordinates), so only relative vectors are ever stored and periodic
images never need wrapping.

Orientation conventions:
  * edges run tail -> head with ascending canonical vertex id; the integer
    `wraps` vector records how many periods the head is shifted by,
  * triangles are counterclockwise,
  * the dual edge of edge e runs from the right triangle to the left one,
    so its tangent is J e_hat (J = counterclockwise quarter turn).
"""

import logging
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp

from .errors import MeshError

logger = logging.getLogger(__name__)

LOCAL_EDGES = ((0, 1), (1, 2), (2, 0))


def rotate_ccw(vectors: np.ndarray) -> np.ndarray:
    """Quarter turn J(x, y) = (-y, x), row-wise."""
    out = np.empty_like(vectors)
    out[..., 0] = -vectors[..., 1]
    out[..., 1] = vectors[..., 0]
    return out


def cross2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def circumcentres(points: np.ndarray) -> np.ndarray:
    """Circumcentres of triangles given as (n, 3, 2) coordinates."""
    a = points[:, 0]
    b = points[:, 1] - a
    c = points[:, 2] - a
    denom = 2.0 * cross2(b, c)
    bb = np.einsum('ij,ij->i', b, b)
    cc = np.einsum('ij,ij->i', c, c)
    ux = (c[:, 1] * bb - b[:, 1] * cc) / denom
    uy = (b[:, 0] * cc - c[:, 0] * bb) / denom
    return a + np.column_stack([ux, uy])


def containment_margins(points: np.ndarray, centres: np.ndarray) -> np.ndarray:
    """Signed distance from each circumcentre to the nearest edge line (positive inside)."""
    margins = np.full(points.shape[0], np.inf)
    for i0, i1 in LOCAL_EDGES:
        edge = points[:, i1] - points[:, i0]
        inward = rotate_ccw(edge) / np.linalg.norm(edge, axis=1)[:, None]
        dist = np.einsum('ij,ij->i', centres - points[:, i0], inward)
        margins = np.minimum(margins, dist)
    return margins


class Triangulation:
    """
    Combinatorics and circumcentric geometry of a planar triangle mesh.

    Parameters
    ----------
    vertices : (nV, 2) canonical vertex coordinates
    triangles : (nT, 3) vertex ids
    shifts : (nT, 3, 2) integer period shifts placing each triangle in one chart
    periods : (2,) torus periods, or None for a bounded mesh
    """

    def __init__(self, vertices: np.ndarray, triangles: np.ndarray,
                 shifts: Optional[np.ndarray] = None, periods: Optional[np.ndarray] = None):
        self.vertices = np.asarray(vertices, dtype=float)
        triangles = np.asarray(triangles, dtype=np.int64).copy()
        if shifts is None:
            shifts = np.zeros(triangles.shape + (2,), dtype=np.int64)
        shifts = np.asarray(shifts, dtype=np.int64).copy()
        self.periods = None if periods is None else np.asarray(periods, dtype=float)
        self.periodic = self.periods is not None

        coords = self._chart_coordinates(triangles, shifts)
        flip = cross2(coords[:, 1] - coords[:, 0], coords[:, 2] - coords[:, 0]) < 0.0
        triangles[flip] = triangles[flip][:, [0, 2, 1]]
        shifts[flip] = shifts[flip][:, [0, 2, 1]]
        self.triangles = triangles
        self.shifts = shifts
        self.tri_coords = self._chart_coordinates(triangles, shifts)

        self.n_vertices = self.vertices.shape[0]
        self.n_triangles = triangles.shape[0]

        self._build_edges()
        self._build_geometry()

    # ------------------------------------------------------------------
    # combinatorics
    # ------------------------------------------------------------------
    def _chart_coordinates(self, triangles: np.ndarray, shifts: np.ndarray) -> np.ndarray:
        coords = self.vertices[triangles].copy()
        if self.periodic:
            coords += shifts * self.periods
        return coords

    def _build_edges(self):
        nT = self.n_triangles
        keys = np.empty((nT, 3, 4), dtype=np.int64)
        orient = np.empty((nT, 3), dtype=np.int64)
        for i, (i0, i1) in enumerate(LOCAL_EDGES):
            a = self.triangles[:, i0]
            b = self.triangles[:, i1]
            forward = a < b
            tail = np.where(forward, a, b)
            head = np.where(forward, b, a)
            delta_shift = self.shifts[:, i1] - self.shifts[:, i0]
            wrap = np.where(forward[:, None], delta_shift, -delta_shift)
            keys[:, i] = np.column_stack([tail, head, wrap])
            orient[:, i] = np.where(forward, 1, -1)
            if np.any(a == b):
                raise MeshError("degenerate triangle with a repeated vertex")

        flat = keys.reshape(-1, 4)
        unique, inverse = np.unique(flat, axis=0, return_inverse=True)
        inverse = np.asarray(inverse).reshape(nT, 3)

        self.edges = unique[:, :2].copy()
        self.edge_wraps = unique[:, 2:].copy()
        self.n_edges = unique.shape[0]
        self.tri_edges = inverse
        self.tri_edge_orient = orient

        rows = np.repeat(np.arange(self.n_edges), 2)
        cols = self.edges.ravel()
        vals = np.tile([-1, 1], self.n_edges)
        self.D0 = sp.csr_matrix((vals, (rows, cols)), shape=(self.n_edges, self.n_vertices), dtype=np.int64)
        self.D1 = sp.csr_matrix(
            (orient.ravel(), (np.repeat(np.arange(nT), 3), inverse.ravel())),
            shape=(nT, self.n_edges), dtype=np.int64)

        counts = np.bincount(inverse.ravel(), minlength=self.n_edges)
        if np.any(counts > 2) or np.any(counts == 0):
            raise MeshError("edge shared by more than two triangles: not a manifold triangulation")
        if self.periodic and np.any(counts != 2):
            raise MeshError("periodic triangulation has boundary edges")

        left = np.full(self.n_edges, -1, dtype=np.int64)
        right = np.full(self.n_edges, -1, dtype=np.int64)
        left_local = np.full(self.n_edges, -1, dtype=np.int64)
        right_local = np.full(self.n_edges, -1, dtype=np.int64)
        for i in range(3):
            e = inverse[:, i]
            pos = orient[:, i] > 0
            left[e[pos]] = np.nonzero(pos)[0]
            left_local[e[pos]] = i
            right[e[~pos]] = np.nonzero(~pos)[0]
            right_local[e[~pos]] = i
        self.edge_left = left
        self.edge_right = right
        self.edge_left_local = left_local
        self.edge_right_local = right_local
        self.boundary_edges = (left < 0) | (right < 0)
        if np.any(self.boundary_edges & (counts == 2)):
            raise MeshError("interior edge traversed twice in the same direction: triangles not coherently oriented")

    # ------------------------------------------------------------------
    # geometry
    # ------------------------------------------------------------------
    def _build_geometry(self):
        coords = self.tri_coords
        tails = self.vertices[self.edges[:, 0]]
        heads = self.vertices[self.edges[:, 1]]
        if self.periodic:
            heads = heads + self.edge_wraps * self.periods
        vec = heads - tails
        self.edge_lengths = np.linalg.norm(vec, axis=1)
        self.edge_tangents = vec / self.edge_lengths[:, None]
        self.edge_normals = rotate_ccw(self.edge_tangents)
        self.edge_tails = tails
        self.edge_midpoints = tails + 0.5 * vec

        self.tri_areas = 0.5 * cross2(coords[:, 1] - coords[:, 0], coords[:, 2] - coords[:, 0])
        if np.any(self.tri_areas <= 0.0):
            raise MeshError("nonpositive triangle area")
        self.tri_centroids = coords.mean(axis=1)
        self.circumcentres = circumcentres(coords)
        self.margins = containment_margins(coords, self.circumcentres)

        self.dual_segments = self._dual_segments()
        seg = self.dual_segments[:, 1] - self.dual_segments[:, 0]
        self.dual_lengths = np.linalg.norm(seg, axis=1)
        if np.any(self.dual_lengths <= 0.0):
            raise MeshError("zero-length dual edge (right triangle or cocircular vertices)")
        self.dual_tangents = self.edge_normals.copy()
        self.dual_midpoints = 0.5 * (self.dual_segments[:, 0] + self.dual_segments[:, 1])

        self._build_refinement()

    def chart_offset(self, tri: np.ndarray, local: np.ndarray, edges: np.ndarray) -> np.ndarray:
        """
        Vector taking edge-chart coordinates of `edges` into the chart of `tri`,
        where `local` is the local index of the edge inside the triangle.
        """
        orient = self.tri_edge_orient[tri, local]
        tail_local = np.where(orient > 0, local, (local + 1) % 3)
        return self.tri_coords[tri, tail_local] - self.edge_tails[edges]

    def _dual_segments(self) -> np.ndarray:
        ids = np.arange(self.n_edges)
        start = self.edge_midpoints.copy()
        end = self.edge_midpoints.copy()

        has_left = self.edge_left >= 0
        tl, ll = self.edge_left[has_left], self.edge_left_local[has_left]
        end[has_left] = self.circumcentres[tl] - self.chart_offset(tl, ll, ids[has_left])

        has_right = self.edge_right >= 0
        tr, lr = self.edge_right[has_right], self.edge_right_local[has_right]
        start[has_right] = self.circumcentres[tr] - self.chart_offset(tr, lr, ids[has_right])
        return np.stack([start, end], axis=1)

    def _build_refinement(self):
        """Six triangles (x_v, m_e, c_T) per primal triangle."""
        nT = self.n_triangles
        points = np.empty((nT, 6, 3, 2))
        owner = np.empty((nT, 6), dtype=np.int64)
        owner_local = np.empty((nT, 6), dtype=np.int64)
        edge_of = np.empty((nT, 6), dtype=np.int64)
        c = self.circumcentres
        for i, (i0, i1) in enumerate(LOCAL_EDGES):
            mid = 0.5 * (self.tri_coords[:, i0] + self.tri_coords[:, i1])
            for s, loc in enumerate((i0, i1)):
                slot = 2 * i + s
                points[:, slot, 0] = self.tri_coords[:, loc]
                points[:, slot, 1] = mid
                points[:, slot, 2] = c
                owner[:, slot] = self.triangles[:, loc]
                owner_local[:, slot] = loc
                edge_of[:, slot] = self.tri_edges[:, i]
        areas = 0.5 * np.abs(cross2(points[:, :, 1] - points[:, :, 0], points[:, :, 2] - points[:, :, 0]))

        self.refinement_points = points.reshape(-1, 3, 2)
        self.refinement_owner = owner.ravel()
        self.refinement_triangle = np.repeat(np.arange(nT), 6)
        self.refinement_edge = edge_of.ravel()
        self.refinement_areas = areas.ravel()

        self.voronoi_areas = np.bincount(self.refinement_owner, weights=self.refinement_areas,
                                         minlength=self.n_vertices)
        if np.any(self.voronoi_areas <= 0.0):
            raise MeshError("vertex with empty dual cell")

        # kite area of vertex `loc` inside each triangle
        kites = np.zeros((nT, 3))
        for slot in range(6):
            np.add.at(kites, (np.arange(nT), owner_local[:, slot]), areas[:, slot])
        self.kite_areas = kites

        centroid = self.refinement_points.mean(axis=1) - self.refinement_points[:, 0]
        weighted = centroid * self.refinement_areas[:, None]
        offsets = np.zeros((self.n_vertices, 2))
        np.add.at(offsets, self.refinement_owner, weighted)
        self.voronoi_centroid_offsets = offsets / self.voronoi_areas[:, None]

    # ------------------------------------------------------------------
    # helpers used by the complex builders
    # ------------------------------------------------------------------
    def dual_vertex_positions(self) -> np.ndarray:
        return self.circumcentres.copy()

    def canonical_positions(self, points: np.ndarray) -> np.ndarray:
        if not self.periodic:
            return points.copy()
        return np.mod(points, self.periods)

    def boundary_vertex_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_vertices, dtype=bool)
        mask[self.edges[self.boundary_edges].ravel()] = True
        return mask

    def boundary_triangle_mask(self) -> np.ndarray:
        touching = self.boundary_vertex_mask()[self.triangles].any(axis=1)
        return touching

    def edge_endpoints_in_edge_chart(self) -> Tuple[np.ndarray, np.ndarray]:
        heads = self.edge_tails + self.edge_lengths[:, None] * self.edge_tangents
        return self.edge_tails, heads
