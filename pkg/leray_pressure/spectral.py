"""
Spectral probes: harmonic 1-cochains, the Poincare constant on V_h and the
inf-sup constant of the mean-zero scalar Laplacian.

All three use shift-invert subspace iteration with a factorized SPD matrix and
Rayleigh-Ritz on the iterate; known kernels are deflated explicitly.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

import settings
from dec_core import SparseSPDSolver
from mesh_complex import EigenError, ValidationError
from .leray import LerayContext, leray_project

logger = logging.getLogger(__name__)

SHIFT = -1.0
KERNEL_TOL = 1e-6


@dataclass
class EigenResult:
    value: float
    iterations: int
    ritz_values: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {'value': self.value, 'iterations': self.iterations, 'ritz_values': list(self.ritz_values)}


@dataclass
class HarmonicBasis:
    vectors: np.ndarray          # (dimension, n_dual_edges), M1-orthonormal rows
    ritz_values: np.ndarray
    iterations: int

    @property
    def dimension(self) -> int:
        return self.vectors.shape[0]

    def components(self, ops, v: np.ndarray) -> np.ndarray:
        return np.array([ops.inner(eta, v, 1) for eta in self.vectors])

    def remove(self, ops, v: np.ndarray) -> np.ndarray:
        return v - self.components(ops, v) @ self.vectors


def _m_orthonormalize(X: np.ndarray, weights: np.ndarray) -> np.ndarray:
    root = np.sqrt(weights)[:, None]
    Q, _ = np.linalg.qr(root * X)
    return Q / root


def subspace_iteration(stiffness: sp.spmatrix, weights: np.ndarray, block: int, wanted: int,
                       shift: float = 0.0, constrain: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                       solve: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                       rng: Optional[np.random.Generator] = None,
                       tol: float = None, max_iter: int = None) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Lowest `wanted` eigenpairs of (stiffness, diag(weights)) by shift-invert
    block iteration. `constrain` maps each iterate back into the admissible
    subspace; `solve` overrides the shifted solve. Returns
    (ritz values, ritz vectors as columns, iterations).
    """
    tol = settings.EIGEN_TOL if tol is None else tol
    max_iter = settings.EIGEN_MAX_ITER if max_iter is None else max_iter
    rng = np.random.default_rng(0) if rng is None else rng
    n = stiffness.shape[0]
    if solve is None:
        shifted = SparseSPDSolver(stiffness - shift * sp.diags(weights))
        solve = shifted.solve

    X = rng.standard_normal((n, block))
    if constrain is not None:
        X = constrain(X)
    X = _m_orthonormalize(X, weights)
    previous = None
    for it in range(1, max_iter + 1):
        Y = np.column_stack([solve(weights * X[:, i]) for i in range(block)])
        if constrain is not None:
            Y = constrain(Y)
        Y = _m_orthonormalize(Y, weights)
        theta, S = sla.eigh(Y.T @ (stiffness @ Y))
        X = Y @ S
        current = theta[:wanted]
        if previous is not None and np.all(np.abs(current - previous) <= tol * np.maximum(1.0, np.abs(current))):
            return theta, X, it
        previous = current
    raise EigenError(f"subspace iteration stagnated after {max_iter} iterations "
                     f"(last Ritz values {np.array2string(previous, precision=6)})")


def expected_harmonic_dimension(cx) -> int:
    return cx.dimension if cx.is_periodic else 0


def harmonic_basis(ctx: LerayContext, rng: Optional[np.random.Generator] = None) -> HarmonicBasis:
    """
    M1-orthonormal basis of ker(D~1) in V_h, from the Hodge pencil
    (D~1^T M2 D~1 + M1 D~0 M0^-1 D~0^T M1, M1) shifted by SHIFT.
    """
    cached = ctx._cache.get('harmonic')
    if cached is not None:
        return cached
    ops = ctx.ops
    cx = ops.complex
    if not cx.is_periodic:
        raise ValidationError("harmonic basis is defined on periodic complexes", module='leray_pressure')
    expected = expected_harmonic_dimension(cx)
    grad_form = ops.divergence_matrix.T @ sp.diags(1.0 / ops.M0) @ ops.divergence_matrix
    hodge = sp.csr_matrix(ops.curl_curl_form + grad_form)
    theta, X, iterations = subspace_iteration(hodge, ops.M1, block=expected + 4, wanted=expected + 1,
                                              shift=SHIFT, rng=rng)
    scale = max(1.0, abs(theta[expected]))
    found = int(np.sum(theta < KERNEL_TOL * scale))
    if found != expected:
        raise EigenError(f"harmonic dimension {found} != {expected}: the complex is broken")
    vectors = X[:, :found].T.copy()
    basis = HarmonicBasis(vectors=vectors, ritz_values=theta, iterations=iterations)
    ctx._cache['harmonic'] = basis
    logger.info("|-- [OK] Harmonic basis: dimension %d in %d iterations", found, iterations)
    return basis


def poincare_constant(ctx: LerayContext, rng: Optional[np.random.Generator] = None) -> EigenResult:
    """Smallest eigenvalue of Delta_h on V_h with the harmonic space removed."""
    ops = ctx.ops
    if ctx.bounded:
        raise ValidationError("Poincare probe is defined on closed complexes", module='leray_pressure')
    harmonic = harmonic_basis(ctx, rng)

    def constrain(X: np.ndarray) -> np.ndarray:
        return np.column_stack([harmonic.remove(ops, leray_project(ctx, X[:, i])) for i in range(X.shape[1])])

    theta, _, iterations = subspace_iteration(ops.curl_curl_form, ops.M1, block=4, wanted=1,
                                              shift=SHIFT, constrain=constrain, rng=rng)
    value = float(theta[0])
    logger.info("|-- [OK] Poincare constant %.6g (%d iterations)", value, iterations)
    return EigenResult(value=value, iterations=iterations, ritz_values=[float(t) for t in theta])


def infsup_constant(ctx: LerayContext, rng: Optional[np.random.Generator] = None) -> EigenResult:
    """sqrt of the smallest nonzero eigenvalue of (L_h, M0), constants deflated."""
    ops = ctx.ops
    weights = ops.M0
    laplacian = ctx.gradient.T @ sp.diags(ops.M1) @ ctx.gradient
    solver = ctx.solver

    def constrain(X: np.ndarray) -> np.ndarray:
        return X - np.outer(np.ones(X.shape[0]), weights @ X / weights.sum())

    theta, _, iterations = subspace_iteration(sp.csr_matrix(laplacian), weights, block=3, wanted=1,
                                              constrain=constrain, solve=solver.solve, rng=rng)
    mu = float(theta[0])
    if mu <= 0.0:
        raise EigenError(f"nonpositive inf-sup eigenvalue {mu:.3e}")
    logger.info("|-- [OK] Inf-sup constant %.6g (%d iterations)", np.sqrt(mu), iterations)
    return EigenResult(value=float(np.sqrt(mu)), iterations=iterations, ritz_values=[float(t) for t in theta])


def infsup_quotients(ctx: LerayContext, count: int = 100,
                     rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """
    b(w, q) / (|w|_H1h |q|_M0) at the witness w = G q for random mean-zero q.

    On closed complexes D~1 G q = 0 and |w|_H1h reduces to |w|_L2h.
    """
    ops = ctx.ops
    rng = np.random.default_rng(0) if rng is None else rng
    weights = ops.M0
    out = np.empty(count)
    for i in range(count):
        q = rng.standard_normal(weights.size)
        q -= weights @ q / weights.sum()
        w = ctx.gradient @ q
        b = float(q @ ctx.divergence(w))
        h1 = np.sqrt(ops.inner(w, w, 1) + ops.inner(ops.d1(w), ops.d1(w), 2))
        out[i] = b / (h1 * np.sqrt(q @ (weights * q)))
    return out
