"""Complex-analysis bounds and optimal relaxation spectra."""

# ruff: noqa: F401

from core.analysis.complex_analysis import (
    LemmaBounds,
    principal_arg,
    principal_sqrt,
    is_on_slit,
    f_map,
    g_map,
    p_map,
    c_R,
    c_R_star,
    ratio_fg,
    beta_interval,
    lemma_bounds,
)
from core.analysis.spectra import (
    SegmentSpectrum,
    BoundReport,
    normalize_mu,
    optimal_omega,
    optimal_rho,
    theorem_bounds,
    asymptotic_rate,
    predicted_iterations,
    iterations_for_rate,
    convergence_rate,
    classical_asymptotic_rate,
)
