"""Optimal complex relaxation parameter and convergence-rate estimates.

For a consistently ordered 2-cyclic matrix whose Jacobi spectrum lies on the
segment [-mu, mu] (Re(mu) >= 0) with both endpoints attained:

    omega_opt = 2 / (1 + sqrt(1 - mu^2)),   rho(L_omega_opt) = |1 - omega_opt|

The two-sided bound on 1 - rho and its asymptotic form near mu = 1 come from
:mod:`core.analysis.complex_analysis` with z = mu.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from core.analysis.complex_analysis import (
    SQRT2,
    _as_complex,
    f_map,
    is_on_slit,
    lemma_bounds,
    principal_arg,
    principal_sqrt,
)
from core.utils.errors import DomainError, NonConvergentError
from core.utils.logger import get_logger

_log = get_logger(__name__)

# Guards ceil() against ln(tol)/ln(rho) landing a few ulps above an integer.
_ITERATION_ROUNDOFF = 1e-9


@dataclass(frozen=True)
class SegmentSpectrum:
    """Endpoint mu of the symmetric Jacobi segment [-mu, mu], Re(mu) >= 0."""

    mu_tilde: complex

    def __post_init__(self):
        mu = _as_complex(self.mu_tilde)
        if mu.real < 0:
            raise DomainError(f"segment endpoint must have Re >= 0, got {mu!r}; use normalize_mu")
        object.__setattr__(self, "mu_tilde", mu)

    @property
    def on_slit(self) -> bool:
        return is_on_slit(self.mu_tilde)


@dataclass(frozen=True)
class BoundReport:
    omega_opt: complex
    rho: float
    delta: float
    R: float
    lower_gap: float
    upper_gap: float
    asymptotic_rate: float
    beta_m: float = 0.0
    beta_M: float = 0.0

    def brackets(self, slack: float = 0.0) -> bool:
        """True when lower_gap <= 1 - rho <= upper_gap (within *slack*)."""
        gap = 1.0 - self.rho
        return self.lower_gap - slack <= gap <= self.upper_gap + slack


def normalize_mu(mu) -> SegmentSpectrum:
    """Pick the representative of {mu, -mu} with Re >= 0 (Im >= 0 on the imaginary axis)."""
    w = _as_complex(mu)
    if w.real > 0:
        return SegmentSpectrum(w)
    if w.real < 0:
        return SegmentSpectrum(-w)
    return SegmentSpectrum(complex(0.0, abs(w.imag)))


def optimal_omega(seg: SegmentSpectrum) -> complex:
    mu = seg.mu_tilde
    denominator = 1 + principal_sqrt((1 - mu) * (1 + mu))
    if denominator == 0:
        raise DomainError(f"1 + sqrt(1 - mu^2) vanishes for mu = {mu!r}")
    return 2 / denominator


def optimal_rho(seg: SegmentSpectrum) -> float:
    return abs(1 - optimal_omega(seg))


def asymptotic_rate(seg: SegmentSpectrum) -> float:
    """2 sqrt(2) sin(delta/2) sqrt|1 - mu|; zero on the slit [1, inf)."""
    mu = seg.mu_tilde
    if mu == 1:
        raise DomainError("asymptotic rate is undefined at mu = 1")
    delta = abs(principal_arg(mu - 1))
    return 2 * SQRT2 * math.sin(delta / 2) * math.sqrt(abs(1 - mu))


def theorem_bounds(seg: SegmentSpectrum, tight: bool = False) -> BoundReport:
    """omega_opt, rho and the two-sided bound on 1 - rho for a segment endpoint."""
    mu = seg.mu_tilde
    if mu == 1:
        raise DomainError("bounds are undefined at mu = 1")
    omega = optimal_omega(seg)
    lemma = lemma_bounds(mu, tight=tight)
    report = BoundReport(
        omega_opt=omega,
        rho=abs(1 - omega),
        delta=lemma.delta,
        R=lemma.radius,
        lower_gap=lemma.lower,
        upper_gap=lemma.upper,
        asymptotic_rate=asymptotic_rate(seg),
        beta_m=lemma.beta_m,
        beta_M=lemma.beta_M,
    )
    _log.debug("bounds for mu=%r: rho=%.12g gaps=[%.6g, %.6g]",
               mu, report.rho, report.lower_gap, report.upper_gap)
    return report


def convergence_rate(rho: float) -> float:
    """Asymptotic convergence rate -log(rho); +inf for rho = 0."""
    if rho < 0:
        raise DomainError(f"spectral radius must be >= 0, got {rho!r}")
    if rho == 0:
        return math.inf
    return -math.log(rho)


def classical_asymptotic_rate(mu: float) -> float:
    """Real-case law 2 sqrt(2) sqrt(R_inf(J)) with R_inf(J) = -log(mu), 0 < mu < 1."""
    if not 0 < mu < 1:
        raise DomainError(f"classical rate needs 0 < mu < 1, got {mu!r}")
    return 2 * SQRT2 * math.sqrt(-math.log(mu))


def iterations_for_rate(rho: float, tol: float) -> int:
    """Smallest k with rho^k <= tol."""
    if not 0 < tol < 1:
        raise DomainError(f"tol must lie in (0, 1), got {tol!r}")
    if rho >= 1:
        raise NonConvergentError(f"spectral radius {rho:.12g} >= 1: iteration does not converge")
    if rho == 0:
        return 1
    return max(1, math.ceil(math.log(tol) / math.log(rho) - _ITERATION_ROUNDOFF))


def predicted_iterations(seg: SegmentSpectrum, tol: float) -> int:
    """Iterations to reduce the error by *tol* at rate rho(L_omega_opt), ignoring constants."""
    return iterations_for_rate(optimal_rho(seg), tol)


def optimal_rho_from_f(seg: SegmentSpectrum) -> float:
    """|f(mu)|; coincides with optimal_rho since f(mu) = omega_opt - 1."""
    return abs(f_map(seg.mu_tilde))
