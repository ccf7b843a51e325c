"""
Admissible viscous operators.

Every kind is written as a weighted curl-curl

    f_visc(v) = -M1^-1 D~1^T (W(v) M2) D~1 v,     W(v) >= 0 diagonal

so <v, f_visc(v)>_1 = -|D~1 v|^2_{W M2} <= 0 for every v.

    none          W = 0
    isotropic     W = nu
    anisotropic   W = nu_h on dual faces of vertical edges, nu_v on the rest (3D)
    smagorinsky   W_k = (C_s l_k)^2 |omega_k / A_k*|,  l_k = sqrt(A_k* / |e_k|)
"""

import logging
from dataclasses import dataclass

import numpy as np

from dec_core import OperatorSet
from mesh_complex import ConfigError, ValidationError

logger = logging.getLogger(__name__)

KINDS = ('none', 'isotropic', 'anisotropic', 'smagorinsky')


@dataclass(frozen=True)
class ViscositySpec:
    kind: str = 'none'
    nu: float = 0.0
    nu_h: float = 0.0
    nu_v: float = 0.0
    smagorinsky: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown viscosity kind '{self.kind}' (expected one of {KINDS})",
                              field='problem.viscosity')
        for name in ('nu', 'nu_h', 'nu_v', 'smagorinsky'):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0.0:
                raise ConfigError(f"viscosity parameter {name}={value} must be finite and >= 0",
                                  field='problem.viscosity')

    # -- constructors ----------------------------------------------------
    @classmethod
    def none(cls) -> 'ViscositySpec':
        return cls()

    @classmethod
    def isotropic(cls, nu: float) -> 'ViscositySpec':
        return cls(kind='isotropic', nu=float(nu))

    @classmethod
    def anisotropic(cls, nu_h: float, nu_v: float) -> 'ViscositySpec':
        return cls(kind='anisotropic', nu_h=float(nu_h), nu_v=float(nu_v))

    @classmethod
    def smagorinsky_model(cls, c_s: float) -> 'ViscositySpec':
        return cls(kind='smagorinsky', smagorinsky=float(c_s))

    @classmethod
    def parse(cls, text: str) -> 'ViscositySpec':
        """'none' | 'isotropic:<nu>' | 'anisotropic:<nu_h>:<nu_v>' | 'smagorinsky:<C_s>' | '<nu>'."""
        parts = [p.strip() for p in str(text).strip().split(':')]
        try:
            if parts == ['none'] or parts == ['']:
                return cls.none()
            if parts[0] == 'isotropic' and len(parts) == 2:
                return cls.isotropic(float(parts[1]))
            if parts[0] == 'anisotropic' and len(parts) == 3:
                return cls.anisotropic(float(parts[1]), float(parts[2]))
            if parts[0] == 'smagorinsky' and len(parts) == 2:
                return cls.smagorinsky_model(float(parts[1]))
            if len(parts) == 1:
                nu = float(parts[0])
                return cls.none() if nu == 0.0 else cls.isotropic(nu)
        except ValueError as exc:
            raise ConfigError(f"malformed viscosity '{text}': {exc}", field='problem.viscosity') from exc
        raise ConfigError(f"malformed viscosity '{text}'", field='problem.viscosity')

    # -- properties ------------------------------------------------------
    @property
    def inviscid(self) -> bool:
        return self.kind == 'none'

    @property
    def linear(self) -> bool:
        return self.kind in ('none', 'isotropic', 'anisotropic')

    def describe(self) -> str:
        if self.kind == 'isotropic':
            return f"isotropic:{self.nu:.17g}"
        if self.kind == 'anisotropic':
            return f"anisotropic:{self.nu_h:.17g}:{self.nu_v:.17g}"
        if self.kind == 'smagorinsky':
            return f"smagorinsky:{self.smagorinsky:.17g}"
        return 'none'

    def check_complex(self, ops: OperatorSet) -> None:
        if self.kind == 'anisotropic' and ops.complex.dimension != 3:
            raise ValidationError("anisotropic viscosity needs a 3D complex (no vertical edge class in 2D)",
                                  module='dynamics')


def mesh_scales(ops: OperatorSet) -> np.ndarray:
    """l_k = sqrt(A_k* / |e_k|) per dual 2-cell."""
    cx = ops.complex
    return np.sqrt(cx.dual_areas / cx.primal_measures[cx.dimension - 2])


def face_weights(ops: OperatorSet, spec: ViscositySpec, v: np.ndarray) -> np.ndarray:
    """Diagonal W(v) of the viscosity-weighted Hodge star W M2."""
    cx = ops.complex
    n2 = cx.n_dual[2]
    if spec.kind == 'none':
        return np.zeros(n2)
    if spec.kind == 'isotropic':
        return np.full(n2, spec.nu)
    if spec.kind == 'anisotropic':
        spec.check_complex(ops)
        vertical = np.abs(cx.edge_tangents[:, 2]) > 0.5
        return np.where(vertical, spec.nu_h, spec.nu_v)
    omega = ops.d1(v)
    scale = mesh_scales(ops)
    return (spec.smagorinsky * scale) ** 2 * np.abs(omega / cx.dual_areas)


def viscous_force(ops: OperatorSet, spec: ViscositySpec, v: np.ndarray) -> np.ndarray:
    if spec.inviscid:
        return np.zeros_like(np.asarray(v, dtype=float))
    weights = face_weights(ops, spec, v)
    return -(ops.dual_d[1].T @ (weights * ops.M2 * ops.d1(v))) / ops.M1


def dissipation(ops: OperatorSet, spec: ViscositySpec, v: np.ndarray) -> float:
    """<v, f_visc(v)>_1 = -sum_k W_k (M2)_kk omega_k^2."""
    omega = ops.d1(v)
    return -float(np.sum(face_weights(ops, spec, v) * ops.M2 * omega ** 2))
