"""
Invariant diagnostics of a flow state.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import numpy as np

from leray_pressure import divergence_residual, harmonic_basis, pressure_mean
from mesh_complex import ValidationError
from reconstruction_advection import chain_lie, wedge_12
from .integrator import FlowState
from .rhs import FlowContext, euler_rhs, pressure
from .viscosity import dissipation

logger = logging.getLogger(__name__)


@dataclass
class DiagnosticRecord:
    time: float
    energy: float
    enstrophy: float
    max_divergence: float
    pressure_mean: float
    circulations: List[float] = field(default_factory=list)
    kelvin_residuals: List[float] = field(default_factory=list)
    harmonic_components: List[float] = field(default_factory=list)
    helicity: Optional[float] = None
    helicity_rate: Optional[float] = None
    energy_equality_residual: Optional[float] = None

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


def energy(ctx: FlowContext, v: np.ndarray) -> float:
    return 0.5 * ctx.ops.inner(v, v, 1)


def enstrophy(ctx: FlowContext, v: np.ndarray) -> float:
    omega = ctx.ops.d1(v)
    return ctx.ops.inner(omega, omega, 2)


def _require_3d(ctx: FlowContext):
    if ctx.complex.dimension != 3:
        raise ValidationError("helicity is defined on 3D complexes only", module='dynamics')


def helicity(ctx: FlowContext, v: np.ndarray) -> float:
    """H_h = sum over dual 3-cells of v ^ D~1 v."""
    _require_3d(ctx)
    return float(np.sum(wedge_12(ctx.advection, v, ctx.ops.d1(v))))


def helicity_rate(ctx: FlowContext, v: np.ndarray, f: Optional[np.ndarray] = None) -> float:
    """dH_h/dt along the right-hand side f (Euler by default)."""
    _require_3d(ctx)
    f = euler_rhs(ctx, v) if f is None else f
    adv = ctx.advection
    d1 = ctx.ops.d1
    return float(np.sum(wedge_12(adv, f, d1(v))) + np.sum(wedge_12(adv, v, d1(f))))


def kelvin_residual(ctx: FlowContext, v: np.ndarray, gamma: np.ndarray,
                    f: Optional[np.ndarray] = None) -> float:
    """
    |gamma . f(v) + v . (L_v^T gamma)| relative to the larger of the two terms.

    gamma may be one loop or a (count, n_dual_edges) stack; the worst loop is returned.
    """
    f = euler_rhs(ctx, v) if f is None else f
    loops = np.atleast_2d(gamma)
    first = loops @ f
    second = (chain_lie(ctx.advection, v) @ loops.T).T @ v
    scale = np.maximum(np.maximum(np.abs(first), np.abs(second)), np.finfo(float).tiny)
    return float(np.max(np.abs(first + second) / scale))


def energy_equality_residual(ctx: FlowContext, v_old: np.ndarray, v_new: np.ndarray, dt: float) -> float:
    """|E+ - E - dt <v_mid, f_visc(v_mid)>| / E for one midpoint step."""
    mid = 0.5 * (v_old + v_new)
    change = energy(ctx, v_new) - energy(ctx, v_old)
    expected = dt * dissipation(ctx.ops, ctx.viscosity, mid)
    return abs(change - expected) / max(energy(ctx, v_old), np.finfo(float).tiny)


def diagnose(ctx: FlowContext, state: FlowState, previous: Optional[FlowState] = None,
             dt: Optional[float] = None, with_pressure: bool = True) -> DiagnosticRecord:
    v = np.asarray(state.velocity, dtype=float)
    f = euler_rhs(ctx, v)
    record = DiagnosticRecord(
        time=float(state.time),
        energy=energy(ctx, v),
        enstrophy=enstrophy(ctx, v),
        max_divergence=divergence_residual(ctx.leray, v),
        pressure_mean=pressure_mean(ctx.ops, pressure(ctx, v)) if with_pressure else 0.0,
    )
    if state.loops is not None:
        record.circulations = [float(g @ v) for g in state.loops]
        if ctx.viscosity.inviscid:
            record.kelvin_residuals = [kelvin_residual(ctx, v, g, f) for g in state.loops]
    if ctx.complex.is_periodic:
        record.harmonic_components = [float(c) for c in harmonic_basis(ctx.leray).components(ctx.ops, v)]
    if ctx.complex.dimension == 3:
        record.helicity = helicity(ctx, v)
        record.helicity_rate = helicity_rate(ctx, v, f)
    if previous is not None and dt is not None:
        record.energy_equality_residual = energy_equality_residual(ctx, previous.velocity, v, dt)
    return record
