"""Stationary iterations on a :class:`SparseMatrix`: SOR and Jacobi."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from core.sparse.kernels import as_work_vector, sor_sweep_inplace
from core.sparse.matrix import SparseMatrix
from core.utils.constants import CONTRACTION_WINDOW, DEFAULT_MAX_ITER, DEFAULT_TOL
from core.utils.errors import DomainError, MatrixSizeError, ZeroVectorError
from core.utils.logger import get_logger

_log = get_logger(__name__)

LinearOperator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SorParams:
    omega: complex
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError(f"tol must be > 0, got {self.tol!r}")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter!r}")
        object.__setattr__(self, "omega", complex(self.omega))


@dataclass
class ConvergenceLog:
    """Relative residual ||b - Ax|| / ||b|| after every sweep."""

    residuals: List[float] = field(default_factory=list)
    converged: bool = False

    @property
    def iterations(self) -> int:
        return len(self.residuals)

    @property
    def final_residual(self) -> float:
        return self.residuals[-1] if self.residuals else math.nan

    def tail_contraction(self, window: int = CONTRACTION_WINDOW) -> float:
        """Geometric-mean residual ratio over the last *window* sweeps.

        Uses every recorded sweep when fewer than ``window + 1`` are available;
        NaN for logs with fewer than two residuals.
        """
        if len(self.residuals) < 2:
            return math.nan
        span = min(window, len(self.residuals) - 1)
        first, last = self.residuals[-1 - span], self.residuals[-1]
        if first == 0:
            return 0.0
        return (last / first) ** (1.0 / span)


def _check_vector(matrix: SparseMatrix, v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=np.complex128)
    if arr.shape != (matrix.n,):
        raise MatrixSizeError(f"{name} must have length {matrix.n}, got shape {arr.shape}")
    return arr


def sor_sweep(matrix: SparseMatrix, omega: complex, x, b) -> np.ndarray:
    """One SOR sweep in natural row order; returns a new vector.

    With ``b = 0`` the result is L_omega x,
    L_omega = (D - omega E)^-1 (omega F + (1 - omega) D).
    """
    work = as_work_vector(_check_vector(matrix, x, "x"))
    rhs = np.ascontiguousarray(_check_vector(matrix, b, "b"))
    sor_sweep_inplace(matrix.row_ptr, matrix.col_idx, matrix.values, matrix.diag_pos,
                      complex(omega), work, rhs)
    return work


def jacobi_sweep(matrix: SparseMatrix, x, b) -> np.ndarray:
    """D^-1 ((E + F) x + b); with ``b = 0`` this is J x, J = I - D^-1 A."""
    x = _check_vector(matrix, x, "x")
    b = _check_vector(matrix, b, "b")
    d = matrix.diagonal()
    return x + (b - matrix.csr @ x) / d


def sor_operator(matrix: SparseMatrix, omega: complex) -> LinearOperator:
    zero = np.zeros(matrix.n, dtype=np.complex128)
    return lambda v: sor_sweep(matrix, omega, v, zero)


def jacobi_operator(matrix: SparseMatrix) -> LinearOperator:
    zero = np.zeros(matrix.n, dtype=np.complex128)
    return lambda v: jacobi_sweep(matrix, v, zero)


def sor_solve(
    matrix: SparseMatrix,
    b,
    params: SorParams,
    x0: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, ConvergenceLog]:
    """Sweep until ||b - Ax||_2 / ||b||_2 <= tol or max_iter sweeps are done.

    Hitting max_iter is reported through ``log.converged = False``, not raised.
    """
    rhs = np.ascontiguousarray(_check_vector(matrix, b, "b"))
    b_norm = float(np.linalg.norm(rhs))
    if b_norm == 0:
        raise ZeroVectorError("b = 0: relative residual is undefined")
    x = as_work_vector(np.zeros(matrix.n) if x0 is None else _check_vector(matrix, x0, "x0"))

    log = ConvergenceLog()
    csr = matrix.csr
    omega = params.omega
    for _ in range(params.max_iter):
        sor_sweep_inplace(matrix.row_ptr, matrix.col_idx, matrix.values, matrix.diag_pos,
                          omega, x, rhs)
        residual = float(np.linalg.norm(rhs - csr @ x)) / b_norm
        log.residuals.append(residual)
        if residual <= params.tol:
            log.converged = True
            break
        if not math.isfinite(residual):
            _log.warning("SOR diverged after %d sweeps (omega=%r)", log.iterations, omega)
            break

    if not log.converged:
        _log.warning("SOR non-convergence: %d sweeps, final residual %.3e (tol %.1e)",
                     log.iterations, log.final_residual, params.tol)
    else:
        _log.debug("SOR converged in %d sweeps (omega=%r)", log.iterations, omega)
    return x, log
