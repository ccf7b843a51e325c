"""
Sparse SPD solves: direct LU below the size limit, Jacobi-preconditioned CG above.
"""

import logging
import threading

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

import settings
from mesh_complex import SolverError

logger = logging.getLogger(__name__)


class SparseSPDSolver:
    """Repeated solves with one symmetric positive definite matrix."""

    def __init__(self, matrix, rtol: float = None, direct_limit: int = None):
        self.matrix = sp.csc_matrix(matrix, dtype=float)
        self.n = self.matrix.shape[0]
        self.rtol = settings.CG_RTOL if rtol is None else rtol
        limit = settings.DIRECT_SOLVE_LIMIT if direct_limit is None else direct_limit
        self.direct = self.n < limit
        self._lock = threading.Lock()
        self._lu = None
        if self.direct:
            try:
                self._lu = spla.splu(self.matrix)
            except RuntimeError as exc:
                raise SolverError(f"sparse factorization failed: {exc}") from exc
        else:
            diag = self.matrix.diagonal()
            if np.any(diag <= 0.0):
                raise SolverError("nonpositive diagonal in an SPD solve")
            inv = 1.0 / diag
            self._precond = spla.LinearOperator(self.matrix.shape, matvec=lambda x: inv * x)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        rhs = np.asarray(rhs, dtype=float)
        with self._lock:
            if self.direct:
                x = self._lu.solve(rhs)
            else:
                x, info = spla.cg(self.matrix, rhs, rtol=self.rtol, atol=0.0,
                                  maxiter=settings.CG_MAX_ITER, M=self._precond)
                if info != 0:
                    raise SolverError(f"conjugate gradients did not converge (info={info})")
        if not np.all(np.isfinite(x)):
            raise SolverError("sparse solve produced non-finite values")
        return x


class ScalarPoissonSolver:
    """
    Solves A x = b for a symmetric semidefinite A whose kernel is the constants.

    One unknown is pinned to remove the kernel; the right-hand side is made
    compatible (zero sum) and the returned solution has zero weighted mean
    sum(w_i x_i) = 0.
    """

    def __init__(self, matrix, weights: np.ndarray, rtol: float = None):
        A = sp.csr_matrix(matrix, dtype=float)
        self.n = A.shape[0]
        self.weights = np.asarray(weights, dtype=float)
        self.matrix = A
        self._reduced = SparseSPDSolver(A[1:, 1:], rtol=rtol)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        b = np.asarray(rhs, dtype=float)
        b = b - b.mean()
        x = np.zeros(self.n)
        x[1:] = self._reduced.solve(b[1:])
        return x - np.dot(self.weights, x) / self.weights.sum()

    def residual(self, x: np.ndarray, rhs: np.ndarray) -> float:
        b = np.asarray(rhs, dtype=float)
        b = b - b.mean()
        scale = max(np.abs(b).max(), np.finfo(float).tiny)
        return float(np.abs(self.matrix @ x - b).max() / scale)
