"""
Matrix Market export of an assembled OperatorSet.
"""

import json
import logging
from pathlib import Path

import scipy.sparse as sp
from scipy.io import mmwrite

import settings
from .operators import OperatorSet

logger = logging.getLogger(__name__)


def operator_matrices(ops: OperatorSet) -> dict:
    cx = ops.complex
    mats = {}
    for k, mat in enumerate(cx.incidence):
        mats[f"D{k}"] = sp.coo_matrix(mat)
    for k, mat in enumerate(ops.dual_d):
        mats[f"dual_D{k}"] = sp.coo_matrix(mat)
    for k, star in enumerate(ops.stars):
        mats[f"M{k}"] = sp.coo_matrix(sp.diags(star))
    mats['L_h'] = sp.coo_matrix(ops.laplacian)
    mats['curl_curl_form'] = sp.coo_matrix(ops.curl_curl_form)
    mats['divergence'] = sp.coo_matrix(ops.divergence_matrix)
    return mats


def export_operators(ops: OperatorSet, directory) -> Path:
    """Write every operator as <name>.mtx plus an operators.json index."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    index = {'schema_version': settings.SCHEMA_VERSION, 'complex': ops.complex.describe(), 'matrices': {}}
    for name, mat in operator_matrices(ops).items():
        path = out / f"{name}.mtx"
        mmwrite(str(path), mat, precision=17)
        index['matrices'][name] = {'file': path.name, 'shape': list(mat.shape), 'nnz': int(mat.nnz)}
    index_path = out / 'operators.json'
    index_path.write_text(json.dumps(index, indent=2, sort_keys=True), encoding='utf-8')
    logger.info("|-- [OK] Exported %d operators to %s", len(index['matrices']), out)
    return index_path
