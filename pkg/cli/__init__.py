# CLI Package
# Config-driven experiment runner and result files

__version__ = "1.0.0"
__author__ = "decflow developers"

from .config import SUBCOMMANDS, FIELDS, ExperimentConfig, read_config_file, build_config
from .outputs import dump_json, write_json, write_csv, read_csv
from .commands import COMMANDS, execute
from .main import build_parser, run, main

__all__ = [
    'SUBCOMMANDS', 'FIELDS', 'ExperimentConfig', 'read_config_file', 'build_config',
    'dump_json', 'write_json', 'write_csv', 'read_csv',
    'COMMANDS', 'execute',
    'build_parser', 'run', 'main',
]
