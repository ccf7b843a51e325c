"""
Pressure recovery from a velocity in V_h (or V_h^0).

The Bernoulli function B = p + e_kin + Phi satisfies G B = -(dv/dt + Q(v, v) - f_visc);
taking the discrete divergence,

    L_h p = -G^T M1 (Q(v, v) - f_visc + G (e_kin + Phi))

solved in the M0-weighted mean-zero gauge.
"""

import logging
from typing import Callable, Optional

import numpy as np

from reconstruction_advection import AdvectionContext, kinetic_energy_density, lamb_vector
from .leray import LerayContext

logger = logging.getLogger(__name__)


def pressure_recover(adv: AdvectionContext, leray: LerayContext, v: np.ndarray,
                     viscous: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                     potential: Optional[np.ndarray] = None) -> np.ndarray:
    """Mean-zero pressure at dual vertices; `viscous` returns the viscous force of v."""
    v = np.asarray(v, dtype=float)
    forcing = leray.mask(lamb_vector(adv, v))
    if viscous is not None:
        forcing = forcing - leray.mask(viscous(v))
    scalar = kinetic_energy_density(adv.recon, v)
    if potential is not None:
        scalar = scalar + np.asarray(potential, dtype=float)
    rhs = -leray.divergence(forcing + leray.gradient @ scalar)
    p = leray.solver.solve(rhs)
    logger.debug("pressure_recover: residual %.3e", leray.solver.residual(p, rhs))
    return p


def pressure_mean(ops, p: np.ndarray) -> float:
    """M0-weighted mean of a dual 0-cochain."""
    return float(np.dot(ops.M0, p) / ops.M0.sum())
