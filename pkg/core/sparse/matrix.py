"""Immutable complex CSR matrix with the implicit splitting A = D - E - F.

The raw CSR arrays are kept alongside a scipy ``csr_array`` view: compiled
sweeps walk ``row_ptr``/``col_idx``/``values`` directly, while matvecs and
graph algorithms go through scipy.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Tuple, Union

import numpy as np
import scipy.sparse as sp

from core.utils.errors import IndexOutOfRangeError, MatrixSizeError, SingularDiagonalError
from core.utils.logger import get_logger

_log = get_logger(__name__)

Triplet = Tuple[int, int, complex]


@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """n x n complex matrix in compressed sparse row form.

    Invariants (checked on construction): ``row_ptr[0] == 0``, ``row_ptr``
    nondecreasing, ``row_ptr[n] == nnz``, column indices strictly increasing
    within each row, every diagonal entry stored and nonzero.
    """

    n: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray
    diag_pos: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        row_ptr = np.ascontiguousarray(self.row_ptr, dtype=np.int64)
        col_idx = np.ascontiguousarray(self.col_idx, dtype=np.int64)
        values = np.ascontiguousarray(self.values, dtype=np.complex128)
        n = int(self.n)
        if n < 1:
            raise MatrixSizeError(f"dimension must be >= 1, got {n}")
        if row_ptr.shape != (n + 1,):
            raise MatrixSizeError(f"row_ptr must have length n + 1 = {n + 1}, got {row_ptr.shape}")
        if col_idx.shape != values.shape or col_idx.ndim != 1:
            raise MatrixSizeError("col_idx and values must be 1-D arrays of equal length")
        if row_ptr[0] != 0 or row_ptr[-1] != len(values) or np.any(np.diff(row_ptr) < 0):
            raise MatrixSizeError("row_ptr must start at 0, be nondecreasing and end at nnz")
        if len(col_idx) and (col_idx.min() < 0 or col_idx.max() >= n):
            raise IndexOutOfRangeError(f"column index outside [0, {n})")

        rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(row_ptr))
        # Within a row consecutive columns must increase; a row boundary resets.
        same_row = rows[1:] == rows[:-1]
        if np.any(col_idx[1:][same_row] <= col_idx[:-1][same_row]):
            raise MatrixSizeError("column indices must be strictly increasing within each row")

        on_diag = np.flatnonzero(rows == col_idx)
        diag_pos = np.full(n, -1, dtype=np.int64)
        diag_pos[rows[on_diag]] = on_diag
        missing = np.flatnonzero(diag_pos < 0)
        if len(missing):
            raise SingularDiagonalError(f"diagonal entry missing in row {int(missing[0])}")
        zero = np.flatnonzero(values[diag_pos] == 0)
        if len(zero):
            raise SingularDiagonalError(f"zero diagonal entry in row {int(zero[0])}")

        for name, arr in (("row_ptr", row_ptr), ("col_idx", col_idx), ("values", values)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        diag_pos.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "diag_pos", diag_pos)

    @property
    def nnz(self) -> int:
        return len(self.values)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n, self.n)

    def diagonal(self) -> np.ndarray:
        return self.values[self.diag_pos]

    @cached_property
    def csr(self) -> sp.csr_array:
        """Shared read-only scipy view; copy before mutating."""
        return sp.csr_array((self.values, self.col_idx, self.row_ptr), shape=self.shape)

    def to_scipy(self) -> sp.csr_array:
        return self.csr.copy()

    def to_dense(self) -> np.ndarray:
        return self.csr.toarray()

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.complex128)
        if x.shape != (self.n,):
            raise MatrixSizeError(f"vector of length {self.n} expected, got shape {x.shape}")
        return self.csr @ x

    @classmethod
    def from_scipy(cls, matrix) -> "SparseMatrix":
        """Wrap any scipy sparse matrix/array (converted to canonical CSR)."""
        csr = sp.csr_array(matrix, dtype=np.complex128)
        if csr.shape[0] != csr.shape[1]:
            raise MatrixSizeError(f"square matrix expected, got shape {csr.shape}")
        csr.sum_duplicates()
        csr.sort_indices()
        return cls(csr.shape[0], csr.indptr, csr.indices, csr.data)


def from_triplets(n: int, entries: Iterable[Triplet]) -> SparseMatrix:
    """Assemble a CSR matrix from (row, col, value) triplets; duplicates are summed."""
    entries = list(entries)
    if n < 1:
        raise MatrixSizeError(f"dimension must be >= 1, got {n}")
    rows = np.array([e[0] for e in entries], dtype=np.int64)
    cols = np.array([e[1] for e in entries], dtype=np.int64)
    vals = np.array([e[2] for e in entries], dtype=np.complex128)
    if len(entries) and (rows.min() < 0 or cols.min() < 0 or rows.max() >= n or cols.max() >= n):
        raise IndexOutOfRangeError(f"triplet index outside [0, {n})")
    coo = sp.coo_array((vals, (rows, cols)), shape=(n, n))
    return SparseMatrix.from_scipy(coo.tocsr())


def write_coordinate(matrix: SparseMatrix, path: Union[str, Path]) -> None:
    """Write ``row col re im`` lines (0-based) under a ``# n <n>`` header."""
    coo = matrix.to_scipy().tocoo()
    table = np.column_stack([coo.row, coo.col, coo.data.real, coo.data.imag])
    np.savetxt(path, table, fmt=["%d", "%d", "%.17g", "%.17g"], header=f"n {matrix.n}")
    _log.debug("wrote %d entries of a %dx%d matrix to %s", matrix.nnz, matrix.n, matrix.n, path)


def read_coordinate(path: Union[str, Path]) -> SparseMatrix:
    """Read a file produced by :func:`write_coordinate`."""
    with open(path, "r", encoding="utf-8") as handle:
        header = handle.readline().lstrip("#").split()
        if len(header) != 2 or header[0] != "n":
            raise MatrixSizeError(f"{path}: missing '# n <dimension>' header")
        n = int(header[1])
        table = np.loadtxt(handle, ndmin=2)
    if table.size == 0:
        return from_triplets(n, [])
    entries = [(int(r), int(c), complex(re, im)) for r, c, re, im in table]
    return from_triplets(n, entries)
