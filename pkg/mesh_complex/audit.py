"""
Mesh audit: regularity constants of a CellComplex.

Violations are reported in the audit, never raised.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Dict, Optional

import numpy as np
import scipy.sparse as sp

from .complex import CellComplex

logger = logging.getLogger(__name__)

CASE_B_TOL = 1e-10


@dataclass(frozen=True)
class MeshAudit:
    kind: str
    family: str
    dimension: int
    counts: list
    euler_characteristic: int
    h: float
    h_min: float
    quasi_uniformity: float
    shape_regularity: float
    boundary_shape_regularity: Optional[float]
    max_valence: int
    containment_margin: float
    orthogonality_residual: float
    centroid_proximity: float
    centroid_proximity_vertical: float
    recon_symmetry: float
    vertex_moment: float
    max_gram_condition: float

    @property
    def is_case_b(self) -> bool:
        return self.centroid_proximity <= CASE_B_TOL and self.recon_symmetry <= CASE_B_TOL

    def to_dict(self) -> Dict[str, object]:
        report = asdict(self)
        report['case_b'] = self.is_case_b
        return report


def dual_vertex_grams(cx: CellComplex) -> np.ndarray:
    """G_i = sum of t_hat (x) t_hat over dual edges incident to dual vertex i."""
    inc = cx.dual_incidence[0].tocoo()
    t = cx.dual_tangents
    outer = t[inc.row, :, None] * t[inc.row, None, :]
    d = t.shape[1]
    grams = np.zeros((cx.n_dual[0], d, d))
    np.add.at(grams, inc.col, outer)
    return grams


def _triangle_shape_ratios(coords: np.ndarray) -> np.ndarray:
    sides = np.stack([
        np.linalg.norm(coords[:, 1] - coords[:, 0], axis=1),
        np.linalg.norm(coords[:, 2] - coords[:, 1], axis=1),
        np.linalg.norm(coords[:, 0] - coords[:, 2], axis=1),
    ], axis=1)
    e1 = coords[:, 1] - coords[:, 0]
    e2 = coords[:, 2] - coords[:, 0]
    area = 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    inradius = 2.0 * area / sides.sum(axis=1)
    return inradius / sides.max(axis=1)


def _third_moment_norm(vectors: np.ndarray, weights: np.ndarray, owner: np.ndarray,
                       n_owner: int) -> np.ndarray:
    tensor = np.einsum('n,ni,nj,nk->nijk', weights, vectors, vectors, vectors)
    total = np.zeros((n_owner,) + tensor.shape[1:])
    np.add.at(total, owner, tensor)
    return np.sqrt((total ** 2).reshape(n_owner, -1).sum(axis=1))


def orthogonality_residual(cx: CellComplex) -> float:
    seg = cx.dual_segments[:, 1] - cx.dual_segments[:, 0]
    if cx.dimension == 2:
        dots = np.einsum('ij,ij->i', seg, cx.edge_tangents)
        return float(np.max(np.abs(dots) / cx.dual_lengths))
    fp = cx.face_pairs
    dots = np.einsum('ij,ij->i', seg[fp.edge], cx.edge_tangents[fp.cell])
    return float(np.max(np.abs(dots) / cx.dual_lengths[fp.edge]))


def audit_mesh(cx: CellComplex) -> MeshAudit:
    """Compute every audit field; deterministic for a given complex."""
    logger.info("[INFO] Auditing %s/%s mesh", cx.kind, cx.family)
    tri = cx.layer
    dual_len = cx.dual_lengths
    h = float(dual_len.max())
    h_min = float(dual_len.min())

    ratios = _triangle_shape_ratios(tri.tri_coords)
    boundary_ratio = None
    shape = float(ratios.min())
    if cx.is_bounded:
        band = tri.boundary_triangle_mask()
        boundary_ratio = float(ratios[band].min())
        shape = float(ratios[~band].min()) if np.any(~band) else shape

    valence = np.diff(sp.csc_matrix(cx.incidence[0]).indptr).max()

    offsets_edge = np.linalg.norm(cx.dual_edge_centroid_offsets, axis=1)
    offsets_face = np.linalg.norm(cx.dual_face_centroid_offsets, axis=1)
    proximity = (offsets_edge.max() + offsets_face.max()) / h ** 2
    vertical = 0.0
    if cx.dimension == 3:
        vertical = (np.abs(cx.dual_edge_centroid_offsets[:, 2]).max()
                    + np.abs(cx.dual_face_centroid_offsets[:, 2]).max()) / h ** 2

    fp = cx.face_pairs
    travel = fp.sign[:, None] * cx.dual_tangents[fp.edge]
    symmetry = _third_moment_norm(travel, dual_len[fp.edge] ** 3, fp.cell, cx.n_dual[2]).max() / h ** 3

    inc = cx.dual_incidence[0].tocoo()
    outward = -inc.data[:, None] * cx.dual_tangents[inc.row]
    moment = _third_moment_norm(outward, dual_len[inc.row], inc.col, cx.n_dual[0]).max() / h ** 2

    grams = dual_vertex_grams(cx)
    gram_condition = float(np.linalg.cond(grams).max())

    report = MeshAudit(
        kind=cx.kind,
        family=cx.family,
        dimension=cx.dimension,
        counts=list(cx.n_primal),
        euler_characteristic=cx.euler_characteristic,
        h=h,
        h_min=h_min,
        quasi_uniformity=h / h_min,
        shape_regularity=shape,
        boundary_shape_regularity=boundary_ratio,
        max_valence=int(valence),
        containment_margin=float(tri.margins.min() / h),
        orthogonality_residual=orthogonality_residual(cx),
        centroid_proximity=float(proximity),
        centroid_proximity_vertical=float(vertical),
        recon_symmetry=float(symmetry),
        vertex_moment=float(moment),
        max_gram_condition=gram_condition,
    )
    tag = "|-- [OK]" if report.containment_margin > 0 else "|-- [X]"
    logger.info("%s containment margin %.3e h, proximity %.3e, symmetry %.3e",
                tag, report.containment_margin, report.centroid_proximity, report.recon_symmetry)
    return report
