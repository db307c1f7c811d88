"""Spectral-radius estimation: power iteration and a dense eigenvalue oracle."""
from __future__ import annotations

import math

import numpy as np
import scipy.linalg as sla

from core.sparse.iteration import LinearOperator
from core.sparse.matrix import SparseMatrix
from core.utils.constants import DENSE_ORACLE_MAX_N, POWER_TAIL_WINDOW
from core.utils.errors import DomainError, MatrixSizeError, ZeroVectorError
from core.utils.logger import get_logger
from core.utils.rng import make_rng, random_complex_vector

_log = get_logger(__name__)

MIN_POWER_ITERS = 50
_SQRT_EPS = math.sqrt(np.finfo(np.float64).eps)
_SPLIT_FACTOR = 64.0


def power_spectral_radius(apply: LinearOperator, n: int, iters: int = 2000, seed: int = 0) -> float:
    """Estimate rho of a linear operator by normalized power iteration.

    Returns the geometric mean of the last ``min(20, iters // 2)`` growth
    factors ||A v_k|| / ||v_k||, which is also correct
    when the dominant eigenvalues are a +/- or conjugate pair of equal modulus.
    """
    if iters < MIN_POWER_ITERS:
        raise DomainError(f"power iteration needs iters >= {MIN_POWER_ITERS}, got {iters}")
    rng = make_rng(seed)
    v = random_complex_vector(n, rng)
    v /= np.linalg.norm(v)
    reseeded = False
    growth = np.empty(iters)
    k = 0
    while k < iters:
        w = apply(v)
        norm = float(np.linalg.norm(w))
        if norm == 0:
            if reseeded:
                raise ZeroVectorError("power iteration collapsed to the zero vector twice")
            _log.debug("power iteration hit the zero vector at step %d; reseeding", k)
            reseeded = True
            v = random_complex_vector(n, rng)
            v /= np.linalg.norm(v)
            continue
        growth[k] = norm
        v = w / norm
        k += 1
    window = min(POWER_TAIL_WINDOW, iters // 2)
    return math.exp(float(np.mean(np.log(growth[-window:]))))


def _require_dense_size(matrix: SparseMatrix) -> None:
    if matrix.n > DENSE_ORACLE_MAX_N:
        raise MatrixSizeError(
            f"dense oracle limited to n <= {DENSE_ORACLE_MAX_N}, got n = {matrix.n}")


def dense_sor_matrix(matrix: SparseMatrix, omega: complex) -> np.ndarray:
    """Explicit L_omega = (D - omega E)^-1 (omega F + (1 - omega) D)."""
    _require_dense_size(matrix)
    a = matrix.to_dense()
    d = np.diag(np.diag(a))
    e = -np.tril(a, -1)
    f = -np.triu(a, 1)
    omega = complex(omega)
    return sla.solve_triangular(d - omega * e, omega * f + (1 - omega) * d, lower=True)


def dominant_modulus(eigenvalues: np.ndarray, scale: float = 1.0) -> float:
    """Largest |lambda| after merging clusters of nearly equal eigenvalues.

    A defective eigenvalue comes back from LAPACK as a cluster of radius
    ~sqrt(eps) * scale; the cluster mean is accurate to ~eps. Clusters are
    formed greedily from the largest modulus down.
    """
    remaining = np.asarray(eigenvalues, dtype=np.complex128)
    radius = _SPLIT_FACTOR * _SQRT_EPS * max(1.0, scale)
    best = 0.0
    while remaining.size:
        top = remaining[int(np.argmax(np.abs(remaining)))]
        if abs(top) + radius < best:
            break
        member = np.abs(remaining - top) <= radius
        best = max(best, float(abs(remaining[member].mean())))
        remaining = remaining[~member]
    return best


def dense_spectral_radius(matrix: SparseMatrix, omega: complex) -> float:
    """max |lambda(L_omega)| from a full LAPACK eigenvalue solve."""
    sor = dense_sor_matrix(matrix, omega)
    return dominant_modulus(sla.eigvals(sor), float(np.linalg.norm(sor, 1)))


def dense_jacobi_eigenvalues(matrix: SparseMatrix) -> np.ndarray:
    """Eigenvalues of J = I - D^-1 A."""
    _require_dense_size(matrix)
    a = matrix.to_dense()
    jacobi = np.eye(matrix.n) - a / np.diag(a)[:, None]
    return sla.eigvals(jacobi)
