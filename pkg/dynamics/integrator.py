"""
Time stepping on V_h.

The implicit midpoint rule v+ = v + dt f((v + v+)/2) is solved by fixed-point
iteration with a Newton-Krylov fallback. Advected loops follow the same
midpoint rule through the chain Lie derivative. `step_forward_euler` is the
non-symmetric diagnostic stepper.
"""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.optimize import NoConvergence, newton_krylov

import settings
from mesh_complex import IntegrationError, StepRejected, ValidationError
from reconstruction_advection import advect_loop, chain_lie
from .rhs import FlowContext

logger = logging.getLogger(__name__)

MIN_TOL = 1e-14

Stepper = Callable[[FlowContext, 'FlowState', float], 'FlowState']


@dataclass(frozen=True)
class FlowState:
    time: float
    velocity: np.ndarray
    loops: Optional[np.ndarray] = None      # (n_loops, n_dual_edges)
    steps: int = 0
    iterations: int = 0
    fallbacks: int = 0

    def circulations(self) -> np.ndarray:
        if self.loops is None:
            return np.zeros(0)
        return self.loops @ self.velocity


def _l2h(ctx: FlowContext, x: np.ndarray) -> float:
    return float(np.sqrt(max(ctx.ops.inner(x, x, 1), 0.0)))


def _advance_loops(ctx: FlowContext, state: FlowState, v_new: np.ndarray, dt: float) -> Optional[np.ndarray]:
    if state.loops is None:
        return None
    return np.vstack([advect_loop(ctx.advection, state.velocity, v_new, gamma, dt)
                      for gamma in state.loops])


def step_implicit_midpoint(ctx: FlowContext, state: FlowState, dt: float,
                           tol: Optional[float] = None, max_iter: Optional[int] = None) -> FlowState:
    """One midpoint step; raises StepRejected(suggested_dt=dt/2) when the solve fails."""
    tol = settings.MIDPOINT_TOL if tol is None else tol
    max_iter = settings.MIDPOINT_MAX_ITER if max_iter is None else max_iter
    if dt <= 0.0:
        raise ValidationError(f"time step must be positive, got {dt}", module='dynamics')
    if tol < MIN_TOL:
        raise ValidationError(f"midpoint tolerance {tol:.1e} below {MIN_TOL:.0e}", module='dynamics')

    v = np.asarray(state.velocity, dtype=float)
    scale = max(_l2h(ctx, v), np.finfo(float).tiny)

    def residual(x: np.ndarray) -> np.ndarray:
        return x - v - dt * ctx.rhs(0.5 * (v + x))

    x = v.copy()
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        x_new = v + dt * ctx.rhs(0.5 * (v + x))
        if not np.all(np.isfinite(x_new)):
            break
        change = _l2h(ctx, x_new - x) / scale
        x = x_new
        if change <= tol:
            converged = True
            break

    fallbacks = state.fallbacks
    if not converged:
        logger.warning("[WARNING] Fixed-point iteration stalled at t=%.6g (dt=%.3g); trying Newton-Krylov",
                       state.time, dt)
        fallbacks += 1
        try:
            x = newton_krylov(residual, v.copy(), f_tol=tol * float(np.max(np.abs(v), initial=1.0)),
                              maxiter=max_iter)
        except (NoConvergence, ValueError, FloatingPointError) as exc:
            raise StepRejected(f"midpoint solve failed at t={state.time:.6g} with dt={dt:.3g}: {exc}",
                               suggested_dt=0.5 * dt) from exc
        if not np.all(np.isfinite(x)):
            raise StepRejected(f"midpoint solve diverged at t={state.time:.6g}", suggested_dt=0.5 * dt)

    loops = _advance_loops(ctx, state, x, dt)
    return replace(state, time=state.time + dt, velocity=x, loops=loops, steps=state.steps + 1,
                   iterations=state.iterations + iterations, fallbacks=fallbacks)


def step_forward_euler(ctx: FlowContext, state: FlowState, dt: float, **_) -> FlowState:
    v = np.asarray(state.velocity, dtype=float)
    x = v + dt * ctx.rhs(v)
    loops = None
    if state.loops is not None:
        L = chain_lie(ctx.advection, v)
        loops = np.vstack([gamma + dt * (L @ gamma) for gamma in state.loops])
    return replace(state, time=state.time + dt, velocity=x, loops=loops, steps=state.steps + 1)


STEPPERS = {
    'midpoint': step_implicit_midpoint,
    'forward_euler': step_forward_euler,
}


def advance(ctx: FlowContext, state: FlowState, dt: float, stepper: Stepper = step_implicit_midpoint,
            tol: Optional[float] = None, depth: int = 0, max_halvings: Optional[int] = None) -> FlowState:
    """One step of size dt, recursively split in halves on StepRejected."""
    max_halvings = settings.MAX_HALVINGS if max_halvings is None else max_halvings
    try:
        return stepper(ctx, state, dt, tol=tol)
    except StepRejected as exc:
        if depth >= max_halvings:
            raise IntegrationError(f"step rejected after {depth} halvings at t={state.time:.6g}: {exc}") from exc
        half = exc.suggested_dt if 0.0 < exc.suggested_dt < dt else 0.5 * dt
        logger.warning("[WARNING] Step rejected at t=%.6g, halving dt %.3g -> %.3g", state.time, dt, half)
        n_sub = int(round(dt / half))
        for _ in range(n_sub):
            state = advance(ctx, state, dt / n_sub, stepper, tol, depth + 1, max_halvings)
        return state


def integrate_steps(ctx: FlowContext, state: FlowState, dt: float, n_steps: int,
                    stepper: Stepper = step_implicit_midpoint, tol: Optional[float] = None,
                    observer: Optional[Callable[[FlowState], None]] = None) -> FlowState:
    for _ in range(n_steps):
        state = advance(ctx, state, dt, stepper, tol)
        if observer is not None:
            observer(state)
    return state


def step_count(T: float, dt: float) -> int:
    if T < 0.0 or dt <= 0.0:
        raise ValidationError(f"need T >= 0 and dt > 0, got T={T}, dt={dt}", module='dynamics')
    n = int(round(T / dt))
    if abs(n * dt - T) > 1e-9 * max(T, dt):
        raise ValidationError(f"T={T} is not a multiple of dt={dt}", module='dynamics')
    return n


def time_reverse_check(ctx: FlowContext, v0: np.ndarray, T: float, dt: float,
                       tol: Optional[float] = None, stepper: str = 'midpoint') -> Tuple[float, FlowState]:
    """
    Integrate to T, flip v -> -v, integrate to T again and flip back.

    Returns the relative L2h return error and the final state.
    """
    if not ctx.viscosity.inviscid:
        raise ValidationError("time reversal is an Euler (nu = 0) property", module='dynamics')
    step = STEPPERS[stepper]
    n = step_count(T, dt)
    v0 = np.asarray(v0, dtype=float)
    state = FlowState(time=0.0, velocity=v0.copy())
    if n == 0:
        return 0.0, state
    state = integrate_steps(ctx, state, dt, n, step, tol)
    state = replace(state, velocity=-state.velocity)
    state = integrate_steps(ctx, state, dt, n, step, tol)
    final = -state.velocity
    error = _l2h(ctx, final - v0) / max(_l2h(ctx, v0), np.finfo(float).tiny)
    logger.info("|-- [OK] Time reversal (%s): return error %.3e after 2x%d steps", stepper, error, n)
    return error, replace(state, velocity=final)
