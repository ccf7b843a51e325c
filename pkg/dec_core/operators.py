"""
OperatorSet: diagonal Hodge stars, dual coboundaries and the Laplacians.

Hodge star of dual degree k:  M_k = |primal (d-k)-cell| / |dual k-cell|.
In 2D this gives M0 = |T|, M1 = l/l*, M2 = 1/|K_v*|; in 3D M0 = prism volume,
M1 = face area / dual length, M2 = edge length / dual face area,
M3 = 1/|K_v*|.

    divergence      D~0^T M1          (the D_2 M1 of the scalar Laplacian)
    L_h             D~0^T M1 D~0      symmetric, constants in the kernel
    codifferential  M1^-1 D~1^T M2
    Delta_h         M1^-1 D~1^T M2 D~1
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp

from mesh_complex import CellComplex, OperatorError
from .cochain import Cochain, make_cochain
from .solvers import ScalarPoissonSolver

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OperatorSet:
    complex: CellComplex
    stars: Tuple[np.ndarray, ...]
    dual_d: Tuple[sp.csr_matrix, ...]
    divergence_matrix: sp.csr_matrix
    laplacian: sp.csr_matrix
    curl_curl_form: sp.csr_matrix
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def M0(self) -> np.ndarray:
        return self.stars[0]

    @property
    def M1(self) -> np.ndarray:
        return self.stars[1]

    @property
    def M2(self) -> np.ndarray:
        return self.stars[2]

    @property
    def dimension(self) -> int:
        return self.complex.dimension

    @property
    def laplacian_solver(self) -> ScalarPoissonSolver:
        solver = self._cache.get('laplacian_solver')
        if solver is None:
            solver = ScalarPoissonSolver(self.laplacian, self.M0)
            self._cache['laplacian_solver'] = solver
        return solver

    # -- applications on raw arrays -----------------------------------
    def d0(self, q: np.ndarray) -> np.ndarray:
        return self.dual_d[0] @ q

    def d1(self, v: np.ndarray) -> np.ndarray:
        return self.dual_d[1] @ v

    def d2(self, beta: np.ndarray) -> np.ndarray:
        return self.dual_d[2] @ beta

    def divergence(self, w: np.ndarray) -> np.ndarray:
        return self.divergence_matrix @ w

    def codifferential(self, omega: np.ndarray) -> np.ndarray:
        return (self.dual_d[1].T @ (self.M2 * omega)) / self.M1

    def curl_curl(self, v: np.ndarray) -> np.ndarray:
        """Delta_h v = delta_h D~1 v."""
        return self.codifferential(self.d1(v))

    def inner(self, a: np.ndarray, b: np.ndarray, k: int) -> float:
        return float(np.dot(a, self.stars[k] * b))

    def cochain(self, values: Optional[np.ndarray], k: int) -> Cochain:
        return make_cochain(self.complex, k, values)


def hodge_stars(cx: CellComplex) -> Tuple[np.ndarray, ...]:
    d = cx.dimension
    stars = tuple(cx.primal_measures[d - k] / cx.dual_measures[k] for k in range(d + 1))
    for k, star in enumerate(stars):
        if not np.all(np.isfinite(star)) or np.any(star <= 0.0):
            raise OperatorError(f"nonpositive Hodge star entry in M{k} "
                                f"(min {np.min(star):.3e}); the mesh is not well-centred")
    return stars


def assemble_operators(cx: CellComplex) -> OperatorSet:
    """Assemble stars, dual coboundaries and Laplacians for one complex."""
    logger.info("[INFO] Assembling operators on %s/%s (d=%d)", cx.kind, cx.family, cx.dimension)
    stars = hodge_stars(cx)
    dual_d = tuple(sp.csr_matrix(m, dtype=float) for m in cx.dual_incidence)
    D0 = dual_d[0]
    M1 = sp.diags(stars[1])
    divergence = sp.csr_matrix(D0.T @ M1)
    laplacian = sp.csr_matrix(divergence @ D0)
    curl_curl_form = sp.csr_matrix(dual_d[1].T @ sp.diags(stars[2]) @ dual_d[1])
    ops = OperatorSet(
        complex=cx,
        stars=stars,
        dual_d=dual_d,
        divergence_matrix=divergence,
        laplacian=laplacian,
        curl_curl_form=curl_curl_form,
    )
    logger.info("|-- [OK] M1 range [%.4g, %.4g], L_h nnz=%d", stars[1].min(), stars[1].max(),
                laplacian.nnz)
    return ops
