"""
Command-line surface: `python app.py <subcommand> [flags]`.

Exit status 0 on success, 1 on validation errors (bad flags, config or
inputs), 2 on numerical failures. Errors are reported on stderr as
{"error", "module", "message"} JSON.
"""

import argparse
import json
import logging
import sys
from typing import Dict, List, Optional, Sequence

import settings
from mesh_complex import ConfigError, DecFlowError
from .commands import execute
from .config import build_config, read_config_file
from .outputs import dump_json

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


class _Parser(argparse.ArgumentParser):
    """argparse that raises ConfigError instead of exiting."""

    def error(self, message):
        raise ConfigError(message, field='argv')


def _flag(parser: argparse.ArgumentParser, name: str, key: str, text: str) -> None:
    parser.add_argument(name, dest=key, default=None, help=text)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument('--config', dest='_config', default=None, help="dotenv-format experiment file")
    common.add_argument('--log-level', dest='_log_level', default=None, help="DEBUG, INFO, WARNING, ...")
    _flag(common, '--output-dir', 'output.dir', "directory for result files")
    _flag(common, '--seed', 'seed', "seed for mesh perturbation and random probes")
    _flag(common, '--mesh', 'mesh.spec', "kind:family:n[:layers][:perturbation]")
    _flag(common, '--variant', 'problem.variant', "extrusion variant: face, gram or mean")

    problem = _Parser(add_help=False)
    _flag(problem, '--problem', 'problem.reference', "reference solution name")
    _flag(problem, '--viscosity', 'problem.viscosity', "none | <nu> | isotropic:<nu> | anisotropic:<nu_h>:<nu_v> | "
                                                        "smagorinsky:<C_s>")

    ladder = _Parser(add_help=False)
    _flag(ladder, '--family', 'mesh.family', "A (perturbed) or B (equilateral/structured)")
    _flag(ladder, '--kind', 'mesh.kind', "torus, square or prism (with --family)")
    _flag(ladder, '--layers', 'mesh.layers', "prism layers at the first resolution")
    _flag(ladder, '--perturbation', 'mesh.perturbation', "vertex jitter of family A")
    _flag(ladder, '--resolutions', 'mesh.resolutions', "comma-separated n ladder")

    stepping = _Parser(add_help=False)
    _flag(stepping, '--T', 'integration.T', "final time")
    _flag(stepping, '--dt-coefficient', 'integration.dt_coefficient', "c in dt = c h^2")
    _flag(stepping, '--tol', 'integration.tol', "midpoint solve tolerance")

    parser = _Parser(prog='decflow', description="Structure-preserving DEC flow solver and verification harness")
    sub = parser.add_subparsers(dest='_subcommand', metavar='subcommand', parser_class=_Parser)
    sub.required = True

    sub.add_parser('mesh-audit', parents=[common], help="build a mesh and report its quality audit")

    p = sub.add_parser('invariants', parents=[common], help="random-draw identity suite")
    _flag(p, '--trials', 'invariants.trials', "number of random draws")

    p = sub.add_parser('integrate', parents=[common, problem, stepping], help="integrate a reference problem")
    _flag(p, '--dt', 'integration.dt', "fixed step (default: c h^2)")
    _flag(p, '--stepper', 'integration.stepper', "midpoint or forward_euler")
    _flag(p, '--cadence', 'integration.cadence', "diagnostic sampling cadence in steps")
    p.add_argument('--checkpoints', dest='output.checkpoints', action='store_const', const='true', default=None,
                   help="write velocity checkpoints at every sample")

    p = sub.add_parser('converge', parents=[common, problem, ladder, stepping], help="trajectory convergence rates")
    _flag(p, '--nus', 'problem.nus', "comma-separated viscosities for the uniformity study")

    p = sub.add_parser('truncation', parents=[common, problem, ladder], help="consistency error rates")
    _flag(p, '--time', 'integration.time', "time at which the truncation error is sampled")

    p = sub.add_parser('rates', parents=[common, problem, ladder, stepping], help="auxiliary rate studies")
    _flag(p, '--study', 'rates.study', "hodge, projection, reconstruction, whitney, leibniz, helicity, lie, "
                                       "pressure, conserved or time")
    _flag(p, '--dts', 'integration.dts', "comma-separated steps for the time study (default T/4 .. T/32)")

    p = sub.add_parser('eigen', parents=[common], help="Poincare, inf-sup and harmonic probes")
    _flag(p, '--quotients', 'eigen.quotients', "number of random inf-sup quotients")
    _flag(p, '--resolutions', 'mesh.resolutions', "optional ladder for the uniformity study")

    sub.add_parser('export-operators', parents=[common], help="write operators as Matrix Market files")
    return parser


def _configure_logging(level: Optional[str]) -> None:
    name = (level or settings.LOG_LEVEL).upper()
    numeric = logging.getLevelName(name)
    if not isinstance(numeric, int):
        raise ConfigError(f"unknown log level '{level}'", field='log-level')
    logging.basicConfig(level=numeric, format=LOG_FORMAT)
    logging.getLogger().setLevel(numeric)


def _report(exc: DecFlowError) -> int:
    sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
    return exc.exit_code


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run one subcommand and return the process exit status."""
    try:
        args = vars(build_parser().parse_args(list(sys.argv[1:] if argv is None else argv)))
        _configure_logging(args.pop('_log_level'))
        subcommand = args.pop('_subcommand')
        config_path = args.pop('_config')
        file_values: Dict[str, str] = read_config_file(config_path) if config_path else {}
        config = build_config(subcommand, file_values, args)
        results = execute(config)
    except DecFlowError as exc:
        logger.error("|-- [X] %s: %s", type(exc).__name__, exc)
        return _report(exc)
    sys.stdout.write(dump_json(results))
    return 0


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))

