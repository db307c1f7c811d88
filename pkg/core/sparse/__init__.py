"""Complex CSR storage, SOR/Jacobi iterations, spectral radii and 2-cyclic structure."""

# ruff: noqa: F401

from core.sparse.matrix import SparseMatrix, from_triplets, read_coordinate, write_coordinate
from core.sparse.iteration import (
    SorParams,
    ConvergenceLog,
    sor_sweep,
    jacobi_sweep,
    sor_solve,
    sor_operator,
    jacobi_operator,
)
from core.sparse.spectral import (
    power_spectral_radius,
    dense_spectral_radius,
    dense_sor_matrix,
    dense_jacobi_eigenvalues,
    dominant_modulus,
)
from core.sparse.structure import verify_2cyclic, red_black_permutation
