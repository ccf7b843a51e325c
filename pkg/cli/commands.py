"""
Subcommand pipelines. Each takes a validated ExperimentConfig, writes its
files under config.output_dir and returns the results mapping that goes into
the JSON summary.
"""

import logging
from typing import Callable, Dict, List

import numpy as np

from dec_core import assemble_operators, export_operators
from dynamics import build_flow, integrate
from leray_pressure import (
    expected_harmonic_dimension, harmonic_basis, infsup_constant, infsup_quotients, poincare_constant,
)
from mesh_complex import ConfigError, audit_mesh, build_mesh, homology_basis, parse_mesh_spec, write_mesh
from verification import (
    build_reference, convergence_study, coupled_step, family_spec, initial_velocity, nu_uniformity_study,
    rate_study, run_identity_suite, spectral_study, truncation_study,
)
from .config import ExperimentConfig
from .outputs import write_csv, write_json

logger = logging.getLogger(__name__)

DEFAULT_LADDER = (8, 16, 32, 64)
TABLE_COLUMNS = ('family', 'label', 'norm', 'n', 'h', 'error')


def _mesh(config: ExperimentConfig):
    return build_mesh(parse_mesh_spec(config.mesh), seed=config.seed)


def _study_mesh(config: ExperimentConfig):
    """Resolution-free spec from --family when given, else the --mesh spec."""
    if config.family is not None:
        return family_spec(config.mesh_kind, config.family, config.layers, config.perturbation)
    return parse_mesh_spec(config.mesh)


def _ladder(config: ExperimentConfig):
    return config.resolutions or DEFAULT_LADDER


def _stem(config: ExperimentConfig, suffix: str):
    return config.output_path / f"{config.subcommand}{suffix}"


def _flatten(record: Dict[str, object]) -> Dict[str, object]:
    row = {}
    for key, value in record.items():
        if isinstance(value, (list, tuple)):
            for i, item in enumerate(value):
                row[f"{key}_{i}"] = item
        else:
            row[key] = value
    return row


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------
def mesh_audit(config: ExperimentConfig) -> Dict[str, object]:
    cx = _mesh(config)
    audit = audit_mesh(cx)
    mesh_file = write_mesh(cx, config.output_path / 'mesh.decflow-mesh')
    return {'complex': cx.describe(), 'audit': audit.to_dict(), 'mesh_file': mesh_file.name}


def invariants(config: ExperimentConfig) -> Dict[str, object]:
    cx = _mesh(config)
    report = run_identity_suite(cx, trials=config.trials, rng=np.random.default_rng(config.seed),
                                variant=config.variant)
    report['complex'] = cx.describe()
    return report


def integrate_flow(config: ExperimentConfig) -> Dict[str, object]:
    cx = _mesh(config)
    ref = build_reference(config.reference_name, config.reference_nu)
    ref.check()
    ctx = build_flow(cx, viscosity=config.viscosity_spec, variant=config.variant)
    dt = config.dt if config.dt is not None else coupled_step(config.T, cx.h, config.dt_coefficient)[0]
    loops = np.vstack(homology_basis(cx)) if cx.is_periodic else None
    checkpoint_dir = config.output_path / 'checkpoints' if config.checkpoints else None
    report = integrate(ctx, initial_velocity(ctx, ref), config.T, dt, config.to_dict(), tol=config.tol,
                       cadence=config.cadence, loops=loops, stepper=config.stepper,
                       checkpoint_dir=checkpoint_dir)
    rows = [_flatten(r.to_dict()) for r in report.series]
    write_csv(_stem(config, '.csv'), config, rows)
    return {'complex': cx.describe(), 'dt': dt, 'summary': report.summary, 'checkpoints': report.checkpoints}


def converge(config: ExperimentConfig) -> Dict[str, object]:
    mesh = _study_mesh(config)
    kwargs = dict(dt_coefficient=config.dt_coefficient, tol=config.tol, variant=config.variant, seed=config.seed)
    if config.nus:
        study = nu_uniformity_study(config.reference_name, mesh, _ladder(config), config.T, config.nus, **kwargs)
        tables = study['tables']
        results: Dict[str, object] = {key: study[key] for key in ('slopes', 'spread', 'spread_checked', 'passed')}
    else:
        ref = build_reference(config.reference_name, config.reference_nu)
        tables = {f"{ref.nu:g}": convergence_study(ref, mesh, _ladder(config), config.T, **kwargs)}
        results = {}
    rows: List[Dict[str, object]] = []
    summaries = {}
    for key, table in tables.items():
        rows.extend(table.rows())
        summaries[key] = table.summary()
    write_csv(_stem(config, '.csv'), config, rows, columns=TABLE_COLUMNS)
    results['tables'] = summaries
    return results


def truncation(config: ExperimentConfig) -> Dict[str, object]:
    ref = build_reference(config.reference_name, config.reference_nu)
    table = truncation_study(_study_mesh(config), ref, _ladder(config), t=config.time,
                             variant=config.variant, seed=config.seed)
    write_csv(_stem(config, '.csv'), config, table.rows(), columns=TABLE_COLUMNS)
    return {'table': table.summary()}


def rates(config: ExperimentConfig) -> Dict[str, object]:
    """One auxiliary rate study; `time` refines dt on the --mesh spec instead of a ladder."""
    mesh = parse_mesh_spec(config.mesh) if config.study == 'time' else _study_mesh(config)
    ref = None
    if config.reference is not None:
        ref = build_reference(config.reference, config.reference_nu)
        dimension = 3 if mesh.kind == 'prism' else 2
        if ref.dimension != dimension:
            raise ConfigError(f"reference '{ref.name}' is {ref.dimension}D but the mesh is {dimension}D",
                              field='problem.reference')
    table, extras = rate_study(config.study, mesh, _ladder(config), ref=ref, T=config.T, dts=config.dts,
                               dt_coefficient=config.dt_coefficient, tol=config.tol, seed=config.seed)
    write_csv(_stem(config, '.csv'), config, table.rows(), columns=TABLE_COLUMNS)
    return {'study': config.study, 'table': table.summary(), **extras}


def eigen(config: ExperimentConfig) -> Dict[str, object]:
    cx = _mesh(config)
    leray = build_flow(cx).leray
    rng = np.random.default_rng(config.seed)
    results: Dict[str, object] = {
        'complex': cx.describe(),
        'harmonic_dimension': harmonic_basis(leray, rng).dimension if cx.is_periodic else 0,
        'expected_harmonic_dimension': expected_harmonic_dimension(cx),
    }
    if not leray.bounded:
        results['lambda1'] = poincare_constant(leray, rng).value
    infsup = infsup_constant(leray, rng)
    results['mu1'] = infsup.ritz_values[0]
    results['infsup'] = infsup.value
    results['quotient_min'] = float(infsup_quotients(leray, config.quotients, rng).min())
    if config.resolutions and not leray.bounded:
        results['uniformity'] = spectral_study(parse_mesh_spec(config.mesh), config.resolutions,
                                               config.quotients, config.seed)
    return results


def export_ops(config: ExperimentConfig) -> Dict[str, object]:
    cx = _mesh(config)
    target = config.output_path / 'operators'
    index = export_operators(assemble_operators(cx), target)
    mesh_file = write_mesh(cx, target / 'mesh.decflow-mesh')
    return {'complex': cx.describe(), 'index': str(index.relative_to(config.output_path)),
            'mesh_file': mesh_file.name}


COMMANDS: Dict[str, Callable[[ExperimentConfig], Dict[str, object]]] = {
    'mesh-audit': mesh_audit,
    'invariants': invariants,
    'integrate': integrate_flow,
    'converge': converge,
    'truncation': truncation,
    'rates': rates,
    'eigen': eigen,
    'export-operators': export_ops,
}


def execute(config: ExperimentConfig) -> Dict[str, object]:
    """Run one subcommand and write its JSON summary next to any CSV it produced."""
    logger.info("[INFO] %s: %s", config.subcommand, config.to_json())
    results = COMMANDS[config.subcommand](config)
    write_json(_stem(config, '.json'), config, results)
    return results
