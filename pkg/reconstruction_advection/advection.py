"""
Discrete contraction I_v and the Lamb bilinear form Q.

    M1 I_v(w)    = 1/2 (U~(v) w - D~1^T U~(v)^T v)
    M1 Q(v1, v2) = 1/2 (U~(v1) D~1 v2 - D~1^T U~(v1)^T v2)

Q(v, v) = I_v(D~1 v) and <v, Q(v, v)>_1 = 0 for every linear extrusion.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from dec_core import OperatorSet
from .extrusion import Extrusion, build_extrusion
from .reconstruction import ReconstructionContext, build_reconstruction

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AdvectionContext:
    """Reconstruction plus the flow extrusion and the face extrusion used by the wedge."""
    recon: ReconstructionContext
    extrusion: Extrusion
    face_extrusion: Extrusion
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def ops(self) -> OperatorSet:
        return self.recon.ops

    @property
    def complex(self):
        return self.recon.ops.complex

    @property
    def variant(self) -> str:
        return self.extrusion.variant

    def cached(self, key, factory):
        value = self._cache.get(key)
        if value is None:
            value = factory()
            self._cache[key] = value
        return value


def build_advection(ops: OperatorSet, variant: str = 'face',
                    recon: ReconstructionContext = None) -> AdvectionContext:
    logger.info("[INFO] Building advection context (extrusion %s)", variant)
    recon = recon if recon is not None else build_reconstruction(ops)
    face = build_extrusion(recon, 'face')
    flow = face if variant == 'face' else build_extrusion(recon, variant)
    return AdvectionContext(recon=recon, extrusion=flow, face_extrusion=face)


def extrusion_matrix(ctx: AdvectionContext, v: np.ndarray) -> sp.csr_matrix:
    return ctx.extrusion.matrix(v)


def contraction(ctx: AdvectionContext, v: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """I_v(omega); linear in omega, the second term depends on v alone."""
    ops = ctx.ops
    ext = ctx.extrusion
    return 0.5 * (ext.apply(v, omega) - ops.dual_d[1].T @ ext.apply_transpose(v, v)) / ops.M1


def linear_contraction(ctx: AdvectionContext, v: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """1/2 M1^-1 U~(v) omega."""
    return 0.5 * ctx.extrusion.apply(v, omega) / ctx.ops.M1


def lamb_bilinear(ctx: AdvectionContext, v1: np.ndarray, v2: np.ndarray) -> np.ndarray:
    ops = ctx.ops
    ext = ctx.extrusion
    return 0.5 * (ext.apply(v1, ops.d1(v2)) - ops.dual_d[1].T @ ext.apply_transpose(v1, v2)) / ops.M1


def lamb_vector(ctx: AdvectionContext, v: np.ndarray) -> np.ndarray:
    return lamb_bilinear(ctx, v, v)


def trilinear(ctx: AdvectionContext, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> float:
    """Phi(x, y, z) = <x, Q(y, z)>_1."""
    return float(ctx.ops.inner(x, lamb_bilinear(ctx, y, z), 1))


def _symmetrised(ctx: AdvectionContext, triples) -> float:
    """|sum of Phi over `triples`| relative to the sum of the Cauchy-Schwarz bounds |a|_1 |Q(b, c)|_1."""
    total, scale = 0.0, 0.0
    for a, b, c in triples:
        q = lamb_bilinear(ctx, b, c)
        total += ctx.ops.inner(a, q, 1)
        scale += np.sqrt(ctx.ops.inner(a, a, 1) * ctx.ops.inner(q, q, 1))
    return abs(total) / max(scale, np.finfo(float).tiny)


def polarised_residual(ctx: AdvectionContext, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> float:
    """Six-term symmetrisation of Phi."""
    return _symmetrised(ctx, ((x, y, z), (x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)))


def polarised_two_residual(ctx: AdvectionContext, x: np.ndarray, y: np.ndarray) -> float:
    return _symmetrised(ctx, ((x, x, y), (x, y, x), (y, x, x)))


def energy_identity_residual(ctx: AdvectionContext, v: np.ndarray) -> float:
    """|<v, I_v(D~1 v)>_1| / (|v|_1 |I_v(D~1 v)|_1)."""
    ops = ctx.ops
    q = contraction(ctx, v, ops.d1(v))
    scale = np.sqrt(ops.inner(v, v, 1) * ops.inner(q, q, 1))
    if scale == 0.0:
        return 0.0
    return abs(ops.inner(v, q, 1)) / scale
