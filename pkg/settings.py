"""
decflow process settings

Numerical defaults shared by every package. Values come from the environment
(optionally a .env file next to the working directory) and fall back to the
defaults below.
"""

import os

from dotenv import load_dotenv

load_dotenv()


def _float(name: str, default: float) -> float:
    return float(os.getenv(name, default))


def _int(name: str, default: int) -> int:
    return int(os.getenv(name, default))


# Sparse solves
DIRECT_SOLVE_LIMIT = _int('DECFLOW_DIRECT_SOLVE_LIMIT', 200000)
CG_RTOL = _float('DECFLOW_CG_RTOL', 1e-12)
CG_MAX_ITER = _int('DECFLOW_CG_MAX_ITER', 20000)

# Implicit midpoint
MIDPOINT_TOL = _float('DECFLOW_MIDPOINT_TOL', 1e-13)
MIDPOINT_MAX_ITER = _int('DECFLOW_MIDPOINT_MAX_ITER', 50)
MAX_HALVINGS = _int('DECFLOW_MAX_HALVINGS', 5)

# Mesh generation
MESH_RETRIES = _int('DECFLOW_MESH_RETRIES', 200)

# Eigen probes
EIGEN_TOL = _float('DECFLOW_EIGEN_TOL', 1e-9)
EIGEN_MAX_ITER = _int('DECFLOW_EIGEN_MAX_ITER', 500)

# Output
RESULTS_FOLDER = os.getenv('DECFLOW_RESULTS_FOLDER', 'results')
LOG_LEVEL = os.getenv('DECFLOW_LOG_LEVEL', 'INFO')

SCHEMA_VERSION = 1
