"""
Discrete inner products and norms.
"""

import numpy as np

from .cochain import CochainLike, values_of
from .operators import OperatorSet


def inner_product(ops: OperatorSet, a: CochainLike, b: CochainLike, k: int) -> float:
    """<a, b>_k = a^T M_k b."""
    cx = ops.complex
    return ops.inner(values_of(a, cx, k), values_of(b, cx, k), k)


def norm_l2(v: CochainLike) -> float:
    return float(np.linalg.norm(np.asarray(v, dtype=float)))


def norm_L2h(ops: OperatorSet, v: CochainLike, k: int = 1) -> float:
    return float(np.sqrt(max(inner_product(ops, v, v, k), 0.0)))


def norm_M2(ops: OperatorSet, omega: CochainLike) -> float:
    return norm_L2h(ops, omega, 2)


def norm_H1h(ops: OperatorSet, v: CochainLike) -> float:
    values = values_of(v, ops.complex, 1)
    return float(np.sqrt(ops.inner(values, values, 1) + ops.inner(ops.d1(values), ops.d1(values), 2)))


def norm_Linf_h(ops: OperatorSet, v: CochainLike) -> float:
    """max_j |v_j| / sqrt(M1_jj)."""
    values = values_of(v, ops.complex, 1)
    return float(np.max(np.abs(values) / np.sqrt(ops.M1)))


def norm_rec(ops: OperatorSet, v: CochainLike) -> float:
    """Pointwise-reconstruction norm max_j |v_j| / l*_j."""
    values = values_of(v, ops.complex, 1)
    return float(np.max(np.abs(values) / ops.complex.dual_lengths))
