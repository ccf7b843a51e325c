"""
Consistency of the semi-discrete scheme.

    tau_h(t) = R_h(du/dt) - f_h(R_h u)

with the time derivative sampled analytically. f_h is already Leray projected,
so P_h tau_h = P_h R_h(du/dt) - f_h(R_h u).
"""

import logging
from typing import Iterable, Sequence, Union

import numpy as np

import settings
from dec_core import de_rham, norm_L2h
from dynamics import FlowContext, ViscositySpec, build_flow
from leray_pressure import leray_project
from mesh_complex import CellComplex, MeshSpec, audit_mesh, build_mesh, parse_mesh_spec
from .error_norms import restrict
from .rates import ConvergenceTable
from .references import ReferenceSolution

logger = logging.getLogger(__name__)

# second order less the usual rate tolerance
CASE_B_MINIMUM = 1.75


def flow_for_reference(cx, ref: ReferenceSolution, variant: str = 'face') -> FlowContext:
    viscosity = ViscositySpec.isotropic(ref.nu) if ref.nu > 0.0 else ViscositySpec.none()
    return build_flow(cx, viscosity=viscosity, variant=variant)


def truncation_residual(ctx: FlowContext, ref: ReferenceSolution, t: float = 0.0) -> np.ndarray:
    """P_h tau_h(t) as a dual 1-cochain."""
    cx = ctx.complex
    rate = de_rham(cx, ref.time_derivative_field(t), 1)
    return leray_project(ctx.leray, rate) - ctx.rhs(restrict(cx, ref, t))


def truncation_error(ctx: FlowContext, ref: ReferenceSolution, t: float = 0.0) -> float:
    """||P_h tau_h(t)||_{L2h}."""
    return norm_L2h(ctx.ops, truncation_residual(ctx, ref, t), 1)


def solver_floor(ctx: FlowContext, v: np.ndarray) -> float:
    """Error level set by the Poisson solver tolerance for a field of size v."""
    return settings.CG_RTOL * norm_L2h(ctx.ops, v, 1)


def family_letter(cx: CellComplex) -> str:
    """'B' when the audit finds the centroid-proximal geometry, else 'A'."""
    return 'B' if audit_mesh(cx).is_case_b else 'A'


def ladder_family(complexes: Sequence[CellComplex]) -> str:
    """Family letter of a resolution ladder; 'B' only if every level audits as case B."""
    letters = {family_letter(cx) for cx in complexes}
    return 'B' if letters == {'B'} else 'A'


def truncation_study(mesh: Union[str, MeshSpec], ref: ReferenceSolution, resolutions: Iterable[int], t: float = 0.0,
                     variant: str = 'face', seed: int = 0) -> ConvergenceTable:
    """
    Truncation error over a resolution ladder of one mesh family.

    Case B asks for at least second order: symmetric references such as
    Taylor-Green cancel the leading term there and converge faster.
    """
    ref.check()
    resolutions = list(resolutions)
    spec = parse_mesh_spec(mesh) if isinstance(mesh, str) else mesh
    complexes = [build_mesh(spec.with_resolution(n), seed=seed) for n in resolutions]
    family = ladder_family(complexes)
    table = ConvergenceTable(family=family, label=f"truncation/{ref.name}")
    logger.info("[INFO] Truncation study: %s on %s (family %s), n in %s", ref.name, spec, family, resolutions)
    for n, cx in zip(resolutions, complexes):
        ctx = flow_for_reference(cx, ref, variant)
        table.add(n, cx.h, truncation=truncation_error(ctx, ref, t))
        table.floor = max(table.floor, solver_floor(ctx, restrict(cx, ref, t)))
    if family == 'B':
        table.expect('truncation', minimum=CASE_B_MINIMUM)
    else:
        table.expect('truncation', target=1.0)
    return table
