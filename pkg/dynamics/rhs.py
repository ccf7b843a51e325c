"""
Semi-discrete right-hand sides on V_h (or V_h^0 on the no-slip square).

    Euler           f_h(v) = -P_h Q(v, v)
    Navier-Stokes   f_h(v) = -P_h (Q(v, v) - f_visc(v))

On a bounded complex both are masked to interior dual edges before the
no-slip projection.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from dec_core import OperatorSet, assemble_operators
from leray_pressure import LerayContext, build_leray, leray_project, pressure_recover
from mesh_complex import CellComplex
from reconstruction_advection import AdvectionContext, build_advection, lamb_vector
from .viscosity import ViscositySpec, viscous_force as _viscous_force

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FlowContext:
    ops: OperatorSet
    advection: AdvectionContext
    leray: LerayContext
    viscosity: ViscositySpec
    potential: Optional[np.ndarray] = None

    @property
    def complex(self) -> CellComplex:
        return self.ops.complex

    def with_viscosity(self, viscosity: ViscositySpec) -> 'FlowContext':
        viscosity.check_complex(self.ops)
        return FlowContext(ops=self.ops, advection=self.advection, leray=self.leray,
                           viscosity=viscosity, potential=self.potential)

    def rhs(self, v: np.ndarray) -> np.ndarray:
        return navier_stokes_rhs(self, v)


def build_flow(cx: CellComplex, viscosity: Optional[ViscositySpec] = None, variant: str = 'face',
               potential: Optional[np.ndarray] = None, ops: Optional[OperatorSet] = None) -> FlowContext:
    viscosity = viscosity if viscosity is not None else ViscositySpec.none()
    ops = ops if ops is not None else assemble_operators(cx)
    viscosity.check_complex(ops)
    logger.info("[INFO] Flow context: %s/%s, viscosity %s, extrusion %s",
                cx.kind, cx.family, viscosity.describe(), variant)
    return FlowContext(ops=ops, advection=build_advection(ops, variant), leray=build_leray(ops),
                       viscosity=viscosity, potential=potential)


def viscous_force(ctx: FlowContext, v: np.ndarray, spec: Optional[ViscositySpec] = None) -> np.ndarray:
    return _viscous_force(ctx.ops, spec if spec is not None else ctx.viscosity, v)


def euler_rhs(ctx: FlowContext, v: np.ndarray) -> np.ndarray:
    return -leray_project(ctx.leray, ctx.leray.mask(lamb_vector(ctx.advection, v)))


def navier_stokes_rhs(ctx: FlowContext, v: np.ndarray) -> np.ndarray:
    if ctx.viscosity.inviscid:
        return euler_rhs(ctx, v)
    force = lamb_vector(ctx.advection, v) - viscous_force(ctx, v)
    return -leray_project(ctx.leray, ctx.leray.mask(force))


def pressure(ctx: FlowContext, v: np.ndarray) -> np.ndarray:
    viscous = None if ctx.viscosity.inviscid else (lambda w: viscous_force(ctx, w))
    return pressure_recover(ctx.advection, ctx.leray, v, viscous=viscous, potential=ctx.potential)
