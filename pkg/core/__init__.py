"""Complex SOR toolkit: bounds, sparse iterations and the damped Helmholtz model."""

# ruff: noqa: F401

from core.analysis import (
    principal_arg,
    principal_sqrt,
    f_map,
    g_map,
    c_R,
    c_R_star,
    ratio_fg,
    beta_interval,
    lemma_bounds,
    SegmentSpectrum,
    BoundReport,
    normalize_mu,
    optimal_omega,
    optimal_rho,
    theorem_bounds,
    asymptotic_rate,
    predicted_iterations,
)
from core.sparse import (
    SparseMatrix,
    SorParams,
    ConvergenceLog,
    from_triplets,
    sor_sweep,
    sor_solve,
    jacobi_sweep,
    power_spectral_radius,
    dense_spectral_radius,
    verify_2cyclic,
)
from core.helmholtz import HelmholtzParams, assemble, closed_form_jacobi_eigs, mu_tilde, mu_diagnostics, expected_rate
from core.utils import get_logger, ComplexEncoder, __version__, APP_NAME
