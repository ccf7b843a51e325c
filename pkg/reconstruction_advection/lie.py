"""
Cochain and chain Lie derivatives.

    k = 1:  L_v a = D~0 (I_v a) + 1/2 M1^-1 U~(v) D~1 a
    k = 2:  L_v b = D~1 (1/2 M1^-1 U~(v) b)  [+ I_v(D~2 b) on prism complexes]

Both terms are linear in the argument, so L_v D~0 f = D~0 I_v D~0 f exactly and
the chain Lie derivative (the transpose) commutes with the dual boundary.
"""

import logging

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from mesh_complex import SolverError, ValidationError, dual_boundary
from .advection import AdvectionContext
from .reconstruction import contraction_matrix
from .wedge import three_form_contraction_matrix

logger = logging.getLogger(__name__)

CYCLE_TOL = 1e-10


def lie_matrix(ctx: AdvectionContext, v: np.ndarray, k: int = 1) -> sp.csr_matrix:
    ops = ctx.ops
    inv_m1 = sp.diags(0.5 / ops.M1)
    U = ctx.extrusion.matrix(v)
    if k == 1:
        B = contraction_matrix(ctx.recon, v)
        return sp.csr_matrix(ops.dual_d[0] @ B + inv_m1 @ U @ ops.dual_d[1])
    if k == 2:
        L = ops.dual_d[1] @ inv_m1 @ U
        if ctx.complex.dimension == 3:
            L = L + three_form_contraction_matrix(ctx, v) @ ops.dual_d[2]
        return sp.csr_matrix(L)
    raise ValidationError(f"Lie derivative defined for k in (1, 2), got {k}", module='reconstruction_advection')


def lie_derivative(ctx: AdvectionContext, v: np.ndarray, alpha: np.ndarray, k: int = 1) -> np.ndarray:
    return lie_matrix(ctx, v, k) @ alpha


def chain_lie(ctx: AdvectionContext, v: np.ndarray, k: int = 1) -> sp.csr_matrix:
    """Transpose of the cochain Lie derivative under the unweighted pairing."""
    return sp.csr_matrix(lie_matrix(ctx, v, k).T)


def boundary_defect(ctx: AdvectionContext, gamma: np.ndarray) -> float:
    return float(np.max(np.abs(dual_boundary(ctx.complex, gamma)), initial=0.0))


def advect_loop(ctx: AdvectionContext, v_old: np.ndarray, v_new: np.ndarray,
                gamma: np.ndarray, dt: float) -> np.ndarray:
    """
    Implicit-midpoint step of gamma' = L_v^T gamma with v at the step midpoint.

    Raises ValidationError when gamma is not a cycle.
    """
    scale = max(float(np.max(np.abs(gamma), initial=0.0)), 1.0)
    if boundary_defect(ctx, gamma) > CYCLE_TOL * scale:
        raise ValidationError("loop is not a dual 1-cycle", module='reconstruction_advection')
    chain = chain_lie(ctx, 0.5 * (v_old + v_new))
    eye = sp.identity(chain.shape[0], format='csc')
    lhs = (eye - 0.5 * dt * chain).tocsc()
    rhs = gamma + 0.5 * dt * (chain @ gamma)
    out = spsolve(lhs, rhs)
    logger.debug("advect_loop: dt=%.3g, boundary defect %.3e", dt, boundary_defect(ctx, out))
    if not np.all(np.isfinite(out)):
        raise SolverError("loop advection solve produced non-finite values", module='reconstruction_advection')
    return out
