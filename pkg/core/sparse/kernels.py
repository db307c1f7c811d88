"""Compiled CSR kernels.

The SOR sweep is a forward substitution: row i reads the already-updated
x[j] for j < i, so it cannot be vectorized and runs under numba instead.
``nogil`` lets independent solves share a thread pool.
"""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def sor_sweep_inplace(row_ptr, col_idx, values, diag_pos, omega, x, b):
    """One natural-order SOR sweep over *x*, in place.

    x_i <- (1 - omega) x_i + omega / a_ii (b_i - sum_{j != i} a_ij x_j)
    """
    n = x.shape[0]
    for i in range(n):
        acc = b[i]
        d = diag_pos[i]
        for jj in range(row_ptr[i], row_ptr[i + 1]):
            if jj != d:
                acc -= values[jj] * x[col_idx[jj]]
        x[i] = (1.0 - omega) * x[i] + omega * acc / values[d]


def as_work_vector(x) -> np.ndarray:
    """Fresh contiguous complex128 copy suitable for the in-place kernels."""
    return np.array(x, dtype=np.complex128, copy=True, order="C")
