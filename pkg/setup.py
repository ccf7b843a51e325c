#!/usr/bin/env python3
"""
decflow setup script
Creates the working directories and a default .env, then checks that the
numerical stack is importable.
"""

import importlib
import os
import sys
from pathlib import Path

REQUIRED = ('numpy', 'scipy', 'sympy', 'dotenv', 'pytest')

DEFAULT_ENV = """# decflow environment configuration
DECFLOW_RESULTS_FOLDER=results
DECFLOW_LOG_LEVEL=INFO
DECFLOW_CG_RTOL=1e-12
DECFLOW_MIDPOINT_TOL=1e-13
DECFLOW_MIDPOINT_MAX_ITER=50
DECFLOW_MAX_HALVINGS=5
DECFLOW_DIRECT_SOLVE_LIMIT=200000
DECFLOW_MESH_RETRIES=200
DECFLOW_EIGEN_TOL=1e-9
DECFLOW_EIGEN_MAX_ITER=500
"""


def print_banner():
    """Print the decflow banner"""
    print("=" * 60)
    print("decflow - structure-preserving DEC flow solver")
    print("=" * 60)


def check_python_version():
    """Check that the interpreter is 3.9 or newer"""
    if sys.version_info < (3, 9):
        print("[X] Python 3.9 or higher is required")
        print(f"    Current version: {sys.version}")
        sys.exit(1)
    print(f"[OK] Python version: {sys.version.split()[0]}")


def create_directories():
    """Create the results and configs directories"""
    for directory in ('results', 'configs'):
        Path(directory).mkdir(exist_ok=True)
        print(f"[OK] Directory ready: {directory}")


def create_env_file():
    """Write a default .env if none exists"""
    if os.path.exists('.env'):
        print("[OK] .env file already exists")
        return
    with open('.env', 'w') as f:
        f.write(DEFAULT_ENV)
    print("[OK] Created .env with default numerical settings")


def check_packages() -> bool:
    """Check that the numerical stack imports"""
    missing = []
    for name in REQUIRED:
        try:
            importlib.import_module(name)
        except ImportError:
            missing.append(name)
    if missing:
        print(f"[X] Missing packages: {', '.join(missing)}")
        print("    Install them with: pip install -r requirements.txt")
        return False
    print("[OK] numpy, scipy, sympy, python-dotenv and pytest importable")
    return True


def main():
    """Main setup function"""
    print_banner()
    check_python_version()
    create_directories()
    create_env_file()
    if not check_packages():
        sys.exit(1)
    print("\nNext steps:")
    print("   1. Run the test suite: pytest")
    print("   2. Audit a mesh: python app.py mesh-audit --mesh torus:equilateral:16")
    print("   3. See INTERFACES.md for every subcommand")


if __name__ == "__main__":
    main()
