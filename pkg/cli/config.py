"""
Experiment configuration.

Config files are dotenv-format (`key=value`, `#` comments) with dotted keys,
e.g.

    mesh.spec=torus:equilateral:16
    problem.reference=tg2d
    problem.viscosity=isotropic:0.01
    integration.T=0.5

Command-line flags override file values. The merged mapping is validated into
an immutable ExperimentConfig before any mesh is built.
"""

import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Dict, Mapping, Optional, Tuple

from dotenv import dotenv_values

import settings
from dynamics import STEPPERS, ViscositySpec
from mesh_complex import ConfigError, MeshError, parse_mesh_spec
from reconstruction_advection import EXTRUSION_VARIANTS
from verification import RATE_STUDIES, REFERENCES

logger = logging.getLogger(__name__)

DEFAULT_REFERENCE = 'tg2d'
SUBCOMMANDS = ('mesh-audit', 'invariants', 'integrate', 'converge', 'truncation', 'rates', 'eigen',
               'export-operators')


def _ints(text: str) -> Tuple[int, ...]:
    values = tuple(int(part) for part in str(text).split(',') if part.strip())
    if not values:
        raise ValueError("empty list")
    return values


def _floats(text: str) -> Tuple[float, ...]:
    values = tuple(float(part) for part in str(text).split(',') if part.strip())
    if not values:
        raise ValueError("empty list")
    return values


def _flag(text) -> bool:
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ('1', 'true', 'yes', 'on'):
        return True
    if value in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError(f"not a boolean: '{text}'")


def _choice(options) -> Callable[[str], str]:
    def parse(text: str) -> str:
        value = str(text).strip()
        if value not in options:
            raise ValueError(f"expected one of {sorted(options)}")
        return value
    return parse


def _positive(cast) -> Callable[[str], float]:
    def parse(text: str):
        value = cast(text)
        if value <= 0:
            raise ValueError("must be positive")
        return value
    return parse


# key -> (attribute, parser); defaults live on ExperimentConfig
FIELDS: Dict[str, Tuple[str, Callable]] = {
    'mesh.spec': ('mesh', str),
    'mesh.kind': ('mesh_kind', _choice(('torus', 'square', 'prism'))),
    'mesh.family': ('family', _choice(('A', 'B'))),
    'mesh.layers': ('layers', _positive(int)),
    'mesh.perturbation': ('perturbation', float),
    'mesh.resolutions': ('resolutions', _ints),
    'problem.reference': ('reference', _choice(tuple(REFERENCES))),
    'problem.viscosity': ('viscosity', str),
    'problem.nus': ('nus', _floats),
    'problem.variant': ('variant', _choice(EXTRUSION_VARIANTS)),
    'integration.T': ('T', _positive(float)),
    'integration.dt': ('dt', _positive(float)),
    'integration.dt_coefficient': ('dt_coefficient', _positive(float)),
    'integration.tol': ('tol', _positive(float)),
    'integration.stepper': ('stepper', _choice(tuple(STEPPERS))),
    'integration.cadence': ('cadence', _positive(int)),
    'integration.time': ('time', float),
    'integration.dts': ('dts', _floats),
    'rates.study': ('study', _choice(RATE_STUDIES)),
    'invariants.trials': ('trials', _positive(int)),
    'eigen.quotients': ('quotients', _positive(int)),
    'output.dir': ('output_dir', str),
    'output.checkpoints': ('checkpoints', _flag),
    'seed': ('seed', int),
}


@dataclass(frozen=True)
class ExperimentConfig:
    subcommand: str
    mesh: str = 'torus:equilateral:16'
    mesh_kind: str = 'torus'
    family: Optional[str] = None
    layers: Optional[int] = None
    perturbation: float = 0.15
    resolutions: Optional[Tuple[int, ...]] = None
    reference: Optional[str] = None
    viscosity: str = 'none'
    nus: Optional[Tuple[float, ...]] = None
    variant: str = 'face'
    T: float = 1.0
    dt: Optional[float] = None
    dt_coefficient: float = 1.0
    tol: float = settings.MIDPOINT_TOL
    stepper: str = 'midpoint'
    cadence: int = 1
    time: float = 0.0
    dts: Optional[Tuple[float, ...]] = None
    study: str = 'hodge'
    trials: int = 1000
    quotients: int = 100
    output_dir: str = settings.RESULTS_FOLDER
    checkpoints: bool = False
    seed: int = 0

    @property
    def viscosity_spec(self) -> ViscositySpec:
        return ViscositySpec.parse(self.viscosity)

    @property
    def reference_name(self) -> str:
        """--problem, or Taylor-Green when none was given."""
        return self.reference or DEFAULT_REFERENCE

    @property
    def reference_nu(self) -> float:
        """Viscosity handed to the reference solution; only isotropic flows have one."""
        spec = self.viscosity_spec
        return spec.nu if spec.kind == 'isotropic' else 0.0

    @property
    def output_path(self) -> Path:
        return Path(self.output_dir)

    def to_dict(self) -> Dict[str, object]:
        out = asdict(self)
        for key in ('resolutions', 'nus', 'dts'):
            if out[key] is not None:
                out[key] = list(out[key])
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(',', ':'))


def read_config_file(path) -> Dict[str, str]:
    """Key/value pairs of a dotenv-format experiment file."""
    file_path = Path(path)
    if not file_path.is_file():
        raise ConfigError(f"config file '{file_path}' not found or unreadable", field='config')
    values = dotenv_values(file_path)
    missing = [key for key, value in values.items() if value is None]
    if missing:
        raise ConfigError(f"config keys without a value: {missing}", field=missing[0])
    return dict(values)


def build_config(subcommand: str, file_values: Optional[Mapping[str, object]] = None,
                 overrides: Optional[Mapping[str, object]] = None) -> ExperimentConfig:
    """
    Merge file values and flag overrides (flags win) and validate every field.

    Raises ConfigError naming the offending key.
    """
    if subcommand not in SUBCOMMANDS:
        raise ConfigError(f"unknown subcommand '{subcommand}'", field='subcommand')
    merged: Dict[str, object] = {}
    for source in (file_values or {}, overrides or {}):
        for key, value in source.items():
            if value is not None:
                merged[key] = value

    unknown = sorted(set(merged) - set(FIELDS))
    if unknown:
        raise ConfigError(f"unknown config keys {unknown}", field=unknown[0])

    kwargs: Dict[str, object] = {'subcommand': subcommand}
    for key, (attribute, parse) in FIELDS.items():
        if key not in merged:
            continue
        raw = merged[key]
        try:
            kwargs[attribute] = parse(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid value '{raw}' for '{key}': {exc}", field=key) from exc

    config = ExperimentConfig(**kwargs)
    _cross_check(config)
    logger.debug("Experiment config: %s", config.to_json())
    return config


def _cross_check(config: ExperimentConfig) -> None:
    try:
        parse_mesh_spec(config.mesh)
    except MeshError as exc:
        raise ConfigError(str(exc), field='mesh.spec') from exc
    # ViscositySpec.parse raises ConfigError(field='problem.viscosity') itself
    config.viscosity_spec
    if config.resolutions is not None and any(n < 2 for n in config.resolutions):
        raise ConfigError("resolutions must be at least 2", field='mesh.resolutions')
    if config.mesh_kind == 'prism' and config.layers is None and config.family is not None \
            and config.subcommand in ('converge', 'truncation', 'rates'):
        raise ConfigError("prism families need mesh.layers", field='mesh.layers')
    if config.dt is not None and config.dt > config.T:
        raise ConfigError(f"dt={config.dt} exceeds T={config.T}", field='integration.dt')
