"""
Trajectory runner: integrates a flow, samples diagnostics at a fixed cadence
and optionally writes velocity checkpoints in the decflow-cochain format.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from dec_core import make_cochain, write_cochain
from .diagnostics import DiagnosticRecord, diagnose
from .integrator import STEPPERS, FlowState, advance, step_count
from .rhs import FlowContext

logger = logging.getLogger(__name__)


@dataclass
class ExperimentReport:
    config: Dict[str, object]
    series: List[DiagnosticRecord] = field(default_factory=list)
    summary: Dict[str, object] = field(default_factory=dict)
    checkpoints: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return {
            'config': self.config,
            'series': [r.to_dict() for r in self.series],
            'summary': self.summary,
            'checkpoints': list(self.checkpoints),
        }


def _summarize(series: List[DiagnosticRecord], state: FlowState) -> Dict[str, object]:
    first, last = series[0], series[-1]
    e0 = first.energy
    energies = np.array([r.energy for r in series])
    rel = (energies - e0) / e0 if e0 > 0.0 else energies - e0
    summary = {
        'steps': state.steps,
        'fixed_point_iterations': state.iterations,
        'newton_krylov_fallbacks': state.fallbacks,
        'final_time': last.time,
        'energy_initial': e0,
        'energy_final': last.energy,
        'energy_drift_max': float(np.max(np.abs(rel))),
        'energy_min_ratio': float(energies.min() / e0) if e0 > 0.0 else 1.0,
        'energy_non_increasing': bool(np.all(np.diff(energies) <= 1e-12 * max(e0, 1.0))),
        'max_divergence': max(r.max_divergence for r in series),
    }
    if first.circulations:
        drift = np.abs(np.array(last.circulations) - np.array(first.circulations))
        summary['circulation_drift_max'] = float(drift.max())
        # Kelvin holds for inviscid runs only
        kelvin = [max(r.kelvin_residuals) for r in series if r.kelvin_residuals]
        if kelvin:
            summary['kelvin_residual_max'] = max(kelvin)
    if first.helicity is not None:
        summary['helicity_initial'] = first.helicity
        summary['helicity_final'] = last.helicity
        summary['helicity_rate_max'] = max(abs(r.helicity_rate) for r in series)
    residuals = [r.energy_equality_residual for r in series if r.energy_equality_residual is not None]
    if residuals:
        summary['energy_equality_residual_max'] = max(residuals)
    return summary


def integrate(ctx: FlowContext, v0: np.ndarray, T: float, dt: float, config: Dict[str, object],
              tol: Optional[float] = None, cadence: int = 1, loops: Optional[np.ndarray] = None,
              stepper: str = 'midpoint', checkpoint_dir: Optional[Path] = None,
              with_pressure: bool = True) -> ExperimentReport:
    """
    Run n = T/dt steps from v0, recording diagnostics every `cadence` steps
    (and at the first and last step). Checkpoints land next to each sample.
    """
    n_steps = step_count(T, dt)
    step = STEPPERS[stepper]
    state = FlowState(time=0.0, velocity=np.asarray(v0, dtype=float).copy(), loops=loops)
    report = ExperimentReport(config=dict(config))
    logger.info("[INFO] Integrating %d steps of dt=%.4g (%s, viscosity %s)",
                n_steps, dt, stepper, ctx.viscosity.describe())

    def sample(current: FlowState, previous: Optional[FlowState]):
        record = diagnose(ctx, current, previous, dt if previous is not None else None, with_pressure)
        report.series.append(record)
        if checkpoint_dir is not None:
            path = Path(checkpoint_dir) / f"velocity_{current.steps:06d}.cochain"
            write_cochain(path, make_cochain(ctx.complex, 1, current.velocity), current.time,
                          label=f"velocity step {current.steps}")
            report.checkpoints.append(path.name)

    sample(state, None)
    for i in range(1, n_steps + 1):
        previous = state
        state = advance(ctx, state, dt, step, tol)
        if i % cadence == 0 or i == n_steps:
            sample(state, previous)

    report.summary = _summarize(report.series, state)
    logger.info("|-- [OK] Integration finished: energy drift %.3e, max divergence %.3e",
                report.summary['energy_drift_max'], report.summary['max_divergence'])
    return report
