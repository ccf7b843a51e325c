"""
Discrete Helmholtz-Leray projection.

    P_h w = w - G phi,   G^T M1 G phi = G^T M1 w   (mean-zero gauge)

with G = D~0 on closed complexes and G = mask D~0 (interior dual edges only)
for the no-slip projector onto V_h^0.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp

from dec_core import OperatorSet, ScalarPoissonSolver
from mesh_complex import ValidationError

logger = logging.getLogger(__name__)

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class LerayContext:
    ops: OperatorSet
    interior_mask: Optional[np.ndarray]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def complex(self):
        return self.ops.complex

    @property
    def bounded(self) -> bool:
        return self.interior_mask is not None

    @property
    def gradient(self) -> sp.csr_matrix:
        """D~0, or the masked gradient G0 on a bounded complex."""
        if not self.bounded:
            return self.ops.dual_d[0]
        G = self._cache.get('gradient')
        if G is None:
            G = sp.csr_matrix(sp.diags(self.interior_mask.astype(float)) @ self.ops.dual_d[0])
            self._cache['gradient'] = G
        return G

    @property
    def solver(self) -> ScalarPoissonSolver:
        """Mean-zero solver for G^T M1 G."""
        if not self.bounded:
            return self.ops.laplacian_solver
        solver = self._cache.get('solver')
        if solver is None:
            G = self.gradient
            solver = ScalarPoissonSolver(sp.csr_matrix(G.T @ sp.diags(self.ops.M1) @ G), self.ops.M0)
            self._cache['solver'] = solver
        return solver

    def divergence(self, w: np.ndarray) -> np.ndarray:
        """G^T M1 w; equals D~0^T M1 w (= D2 M1 w) on closed complexes."""
        return self.gradient.T @ (self.ops.M1 * w)

    def mask(self, w: np.ndarray) -> np.ndarray:
        return w if not self.bounded else np.where(self.interior_mask, w, 0.0)


def build_leray(ops: OperatorSet) -> LerayContext:
    cx = ops.complex
    interior = None
    if cx.is_bounded:
        interior = ~np.asarray(cx.dual_boundary_mask, dtype=bool)
        logger.info("[INFO] No-slip projector: %d of %d dual edges interior", int(interior.sum()), interior.size)
    return LerayContext(ops=ops, interior_mask=interior)


def _project(ctx: LerayContext, w: np.ndarray) -> np.ndarray:
    phi = ctx.solver.solve(ctx.divergence(w))
    return w - ctx.gradient @ phi


def leray_project(ctx: LerayContext, w: np.ndarray) -> np.ndarray:
    """Projection onto V_h; on a bounded complex this is the no-slip projector."""
    if ctx.bounded:
        return leray_project_dirichlet(ctx, ctx.mask(w))
    return _project(ctx, np.asarray(w, dtype=float))


def leray_project_dirichlet(ctx: LerayContext, w: np.ndarray) -> np.ndarray:
    """Projection onto V_h^0; input must vanish on boundary dual edges."""
    if not ctx.bounded:
        raise ValidationError("no-slip projection needs a bounded complex", module='leray_pressure')
    w = np.asarray(w, dtype=float)
    scale = max(float(np.max(np.abs(w), initial=0.0)), 1.0)
    if np.max(np.abs(w[~ctx.interior_mask]), initial=0.0) > BOUNDARY_TOL * scale:
        raise ValidationError("input has nonzero values on boundary dual edges", module='leray_pressure')
    return _project(ctx, w)


def gradient_part(ctx: LerayContext, w: np.ndarray) -> np.ndarray:
    """(I - P_h) w."""
    return np.asarray(w, dtype=float) - leray_project(ctx, w)


def divergence_residual(ctx: LerayContext, w: np.ndarray) -> float:
    """max |G^T M1 w|."""
    return float(np.max(np.abs(ctx.divergence(np.asarray(w, dtype=float))), initial=0.0))
