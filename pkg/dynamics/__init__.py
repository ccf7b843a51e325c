# Dynamics Package
# Euler / Navier-Stokes right-hand sides, viscosity, time stepping and invariant diagnostics

__version__ = "1.0.0"
__author__ = "decflow developers"

from .viscosity import KINDS, ViscositySpec, mesh_scales, face_weights, dissipation
from .rhs import (
    FlowContext, build_flow, viscous_force, euler_rhs, navier_stokes_rhs, pressure,
)
from .integrator import (
    FlowState, STEPPERS, step_implicit_midpoint, step_forward_euler, advance, integrate_steps,
    step_count, time_reverse_check,
)
from .diagnostics import (
    DiagnosticRecord, energy, enstrophy, helicity, helicity_rate, kelvin_residual,
    energy_equality_residual, diagnose,
)
from .runner import ExperimentReport, integrate

__all__ = [
    'KINDS', 'ViscositySpec', 'mesh_scales', 'face_weights', 'dissipation',
    'FlowContext', 'build_flow', 'viscous_force', 'euler_rhs', 'navier_stokes_rhs', 'pressure',
    'FlowState', 'STEPPERS', 'step_implicit_midpoint', 'step_forward_euler', 'advance',
    'integrate_steps', 'step_count', 'time_reverse_check',
    'DiagnosticRecord', 'energy', 'enstrophy', 'helicity', 'helicity_rate', 'kelvin_residual',
    'energy_equality_residual', 'diagnose',
    'ExperimentReport', 'integrate',
]
