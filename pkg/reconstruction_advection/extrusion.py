"""
Extrusion matrix U~(v): the velocity-weighted face-edge incidence.

For dual 2-cell k with boundary dual edges j (sign s_jk = D~1[k, j]) and lever
d_jk = (midpoint of dual edge j) - (reference point of k):

    U~_jk(v) = (2 l_k / A_k*) s_jk (u_k(v) . d_jk)

with the face reconstruction u_k(v) = (1/A_k*) e_k x sum_j s_jk v_j d_jk
(e_k = z_hat, l_k = 1 in 2D). U~ has the sparsity of D~1^T and is linear in v;
for this `face` variant U~(v)^T v = 0 identically. The `gram` and `mean`
variants replace u_k(v) by the dual-edge average of the vertex reconstructions.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from mesh_complex import OperatorError
from .reconstruction import ReconstructionContext

logger = logging.getLogger(__name__)

EXTRUSION_VARIANTS = ('face', 'gram', 'mean')


def _cross_normal(normals: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(e x a) . b per row; e = z_hat when `normals` is one-dimensional."""
    if normals.ndim == 1:
        return normals * (a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0])
    return np.einsum('ni,ni->n', normals, np.cross(a, b))


@dataclass(frozen=True, eq=False)
class Extrusion:
    recon: ReconstructionContext
    variant: str
    cell: np.ndarray
    edge: np.ndarray
    weights: sp.csr_matrix

    @property
    def ops(self):
        return self.recon.ops

    @property
    def shape(self):
        cx = self.ops.complex
        return (cx.n_dual[1], cx.n_dual[2])

    def entries(self, v: np.ndarray) -> np.ndarray:
        """Nonzero values of U~(v), one per (dual face, dual edge) pair."""
        return self.weights @ v

    def matrix(self, v: np.ndarray) -> sp.csr_matrix:
        return sp.csr_matrix((self.entries(v), (self.edge, self.cell)), shape=self.shape)

    def apply(self, v: np.ndarray, omega: np.ndarray) -> np.ndarray:
        """U~(v) omega."""
        return np.bincount(self.edge, weights=self.entries(v) * omega[self.cell],
                           minlength=self.shape[0])

    def apply_transpose(self, v: np.ndarray, x: np.ndarray) -> np.ndarray:
        """U~(v)^T x."""
        return np.bincount(self.cell, weights=self.entries(v) * x[self.edge],
                           minlength=self.shape[1])


def face_velocity(recon: ReconstructionContext, v: np.ndarray) -> np.ndarray:
    """
    u_k(v) = (1/A_k*) e_k x sum_j s_jk v_j d_jk for every dual 2-cell k.

    Exact for constant fields tangential to the face.
    """
    cx = recon.ops.complex
    fp = cx.face_pairs
    d = cx.dimension
    flux = np.zeros((cx.n_dual[2], d))
    np.add.at(flux, fp.cell, (fp.sign * v[fp.edge])[:, None] * fp.lever)
    area = cx.dual_areas[:, None]
    if d == 2:
        return np.column_stack([-flux[:, 1], flux[:, 0]]) / area
    return np.cross(cx.dual_face_normals, flux) / area


def _face_weights(recon: ReconstructionContext) -> sp.csr_matrix:
    cx = recon.ops.complex
    fp = cx.face_pairs
    d = cx.dimension
    n_pairs = fp.cell.shape[0]
    area = cx.dual_areas[fp.cell]
    length = cx.primal_measures[d - 2][fp.cell]
    coef = 2.0 * length * fp.sign / area ** 2

    order = np.argsort(fp.cell, kind='stable')
    counts = np.bincount(fp.cell, minlength=cx.n_dual[2])
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])

    # every ordered (p, q) pair inside the same dual face
    reps = counts[fp.cell]
    p = np.repeat(np.arange(n_pairs), reps)
    offset = np.arange(p.size) - np.repeat(np.cumsum(reps) - reps, reps)
    q = order[starts[fp.cell[p]] + offset]

    normals = cx.dual_face_normals[fp.cell[p]]
    geometric = _cross_normal(normals, fp.lever[q], fp.lever[p])
    vals = coef[p] * fp.sign[q] * geometric
    return sp.csr_matrix((vals, (p, fp.edge[q])), shape=(n_pairs, cx.n_dual[1]))


def _averaged_weights(recon: ReconstructionContext, variant: str) -> sp.csr_matrix:
    cx = recon.ops.complex
    fp = cx.face_pairs
    d = cx.dimension
    area = cx.dual_areas[fp.cell]
    length = cx.primal_measures[d - 2][fp.cell]
    coef = 2.0 * length * fp.sign / area

    R = recon.matrices(variant)
    stacked = sp.vstack(R).tocsr()            # (d*nI x nJ), component-major
    interleave = np.arange(cx.n_dual[0] * d).reshape(d, -1).T.ravel()
    vertex_map = stacked[interleave]           # (nI*d x nJ), vertex-major
    edge_vectors = recon.edge_average_matrix(variant) @ vertex_map   # (nJ*d x nJ)

    total = None
    for c in range(d):
        rows = edge_vectors[fp.edge * d + c]
        term = sp.diags(coef * fp.lever[:, c]) @ rows
        total = term if total is None else total + term
    return sp.csr_matrix(total)


def build_extrusion(recon: ReconstructionContext, variant: str = 'face') -> Extrusion:
    if variant not in EXTRUSION_VARIANTS:
        raise OperatorError(f"unknown extrusion variant '{variant}' (expected {EXTRUSION_VARIANTS})",
                            module='reconstruction_advection')
    fp = recon.ops.complex.face_pairs
    weights = _face_weights(recon) if variant == 'face' else _averaged_weights(recon, variant)
    logger.info("|-- [OK] Extrusion '%s' ready (%d pairs)", variant, fp.cell.shape[0])
    return Extrusion(recon=recon, variant=variant, cell=fp.cell, edge=fp.edge, weights=weights)

