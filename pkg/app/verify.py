"""Randomized property suites over the analysis, solver and model layers.

Each property records a *slack* per check: how far the checked quantity sits
inside its allowed region (negative means outside). A property passes when no
check falls below its tolerance; the report lists the worst slack observed.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np
import scipy.sparse.linalg as spla

from core.analysis.complex_analysis import (
    SQRT2,
    c_R,
    c_R_star,
    f_map,
    g_map,
    is_on_slit,
    lemma_bounds,
    principal_sqrt,
    ratio_fg,
)
from core.analysis.spectra import (
    SegmentSpectrum,
    asymptotic_rate,
    normalize_mu,
    optimal_omega,
    optimal_rho,
    optimal_rho_from_f,
    theorem_bounds,
)
from core.helmholtz.model import (
    HelmholtzParams,
    assemble,
    closed_form_jacobi_eigs,
    mu_diagnostics,
    mu_tilde,
)
from core.sparse.iteration import (
    SorParams,
    jacobi_operator,
    sor_operator,
    sor_solve,
    sor_sweep,
)
from core.sparse.matrix import from_triplets
from core.sparse.spectral import (
    dense_jacobi_eigenvalues,
    dense_spectral_radius,
    power_spectral_radius,
)
from core.sparse.structure import verify_2cyclic
from core.utils.constants import ROUNDOFF_SLACK
from core.utils.logger import (
    failure_breakdown,
    failure_count,
    failures,
    get_logger,
    reset_failures,
)
from core.utils.rng import PRNG_NAME, make_rng

_log = get_logger(__name__)

DENSE_RHO_TOL = 1e-8
GAUSS_SEIDEL_TOL = 1e-8
JACOBI_SPECTRUM_TOL = 1e-10
REAL_CASE_TOL = 1e-14
POWER_TOL = 1e-6
MU_GAP_REL_TOL = 5e-3
LINEARITY_TOL = 1e-12
SWEEP_FIXED_POINT_TOL = 1e-12

ORACLE_NS = (4, 6, 8)
ORACLE_ALPHAS = (0.0, 0.5)
ORACLE_KS = (0.0, 2 * math.pi)


@dataclass
class PropertyResult:
    suite: str
    name: str
    tolerance: float = ROUNDOFF_SLACK
    checks: int = 0
    violations: int = 0
    worst_slack: float = math.inf

    @property
    def passed(self) -> bool:
        return self.checks > 0 and self.violations == 0

    def record(self, slack: float) -> None:
        slack = float(slack)
        if math.isnan(slack):
            slack = -math.inf
        self.checks += 1
        self.worst_slack = min(self.worst_slack, slack)
        if slack < -self.tolerance:
            self.violations += 1

    def record_within(self, error: float, bound: float) -> None:
        """Check ``|error| <= bound``; the slack is ``bound - |error|``."""
        self.record(bound - abs(error))

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["passed"] = self.passed
        return data


@dataclass
class VerificationReport:
    samples: int
    seed: int
    results: List[PropertyResult] = field(default_factory=list)
    logged_failures: int = 0
    failure_messages: List[str] = field(default_factory=list)
    failure_kinds: Dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def to_dict(self) -> Dict[str, object]:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "prng": PRNG_NAME,
            "passed": self.passed,
            "properties": [result.to_dict() for result in self.results],
            "logged_failures": self.logged_failures,
            "failure_messages": self.failure_messages,
            "failure_kinds": self.failure_kinds,
        }

    def render(self) -> str:
        lines = [f"Verification (samples={self.samples}, seed={self.seed}, prng={PRNG_NAME})"]
        suite = None
        for result in self.results:
            if result.suite != suite:
                suite = result.suite
                lines.append(f"\n[{suite}]")
            mark = "PASS" if result.passed else "FAIL"
            lines.append(f"  {mark}  {result.name:<44} checks={result.checks:<7d} "
                         f"worst slack={result.worst_slack:+.3e}")
        passed = sum(result.passed for result in self.results)
        lines.append(f"\n{passed}/{len(self.results)} properties passed, "
                     f"{self.logged_failures} failure event(s) logged")
        kinds = ", ".join(f"{count} {kind}" for kind, count in self.failure_kinds.items() if count)
        if kinds:
            lines.append(f"  by kind: {kinds}")
        return "\n".join(lines)


def _sample_disc_point(rng: np.random.Generator, radius: float = 2.0) -> complex:
    """Uniform point of {|z - 1| <= radius, Re(z) >= 0}, off the slit."""
    while True:
        r = radius * math.sqrt(rng.random())
        z = 1 + cmath.rect(r, 2 * math.pi * rng.random())
        if z.real >= 0 and z != 1 and not is_on_slit(z):
            return z


def _record_decreasing(result: PropertyResult, values: List[float]) -> None:
    for left, right in zip(values, values[1:]):
        result.record(left - right)


# ── complex_analysis ─────────────────────────────────────────────────────

def complex_analysis_suite(samples: int, rng: np.random.Generator) -> List[PropertyResult]:
    suite = "complex_analysis"
    branch = PropertyResult(suite, "principal sqrt: w^2 = z, Re(w) >= 0", tolerance=0.0)
    g_identity = PropertyResult(suite, "|1 - g| = 2 sqrt2 sqrt|1 - z|", tolerance=0.0)
    sandwich = PropertyResult(suite, "c_R <= |f - 1| / |1 - g| <= 1")
    lemma = PropertyResult(suite, "lemma lower <= 1 - |f| <= upper")
    modulus = PropertyResult(suite, "|f| <= 1 off the slit")
    slit = PropertyResult(suite, "|f| = 1 on the slit", tolerance=0.0)
    monotone = PropertyResult(suite, "c_R decreasing on [0, 4]")
    monotone_star = PropertyResult(suite, "c*_R decreasing on [0, 4]")
    star = PropertyResult(suite, "c*_R <= c_R")

    for _ in range(samples):
        z = _sample_disc_point(rng)
        radius = abs(z - 1)
        ratio = ratio_fg(z)
        sandwich.record(min(ratio - c_R(radius), 1 - ratio))
        gap = 1 - abs(f_map(z))
        bounds = lemma_bounds(z)
        lemma.record(min(gap - bounds.lower, bounds.upper - gap))
        modulus.record(gap)
        expected = 2 * SQRT2 * math.sqrt(radius)
        g_identity.record_within(abs(1 - g_map(z)) - expected, ROUNDOFF_SLACK * max(1.0, expected))

    for _ in range(max(1, samples // 10)):
        z = complex(8 * rng.random() - 4, 8 * rng.random() - 4)
        w = principal_sqrt(z)
        branch.record_within(abs(w * w - z), ROUNDOFF_SLACK * max(1.0, abs(z)))
        branch.record(w.real)
        cut = complex(-4 * rng.random() - 1e-9, 0.0)
        root = principal_sqrt(cut)
        branch.record_within(abs(root * root - cut), ROUNDOFF_SLACK * max(1.0, abs(cut)))
        branch.record(root.imag)

    for _ in range(max(1, samples // 100)):
        z = complex(1 + 2 * rng.random() + 1e-9, 0.0)
        slit.record_within(abs(f_map(z)) - 1, ROUNDOFF_SLACK)

    grid = [float(R) for R in np.linspace(0.0, 4.0, 1000)]
    _record_decreasing(monotone, [c_R(R) for R in grid])
    _record_decreasing(monotone_star, [c_R_star(R) for R in grid])
    for R in grid:
        star.record(c_R(R) - c_R_star(R))

    return [branch, g_identity, sandwich, lemma, modulus, slit, monotone, monotone_star, star]


# ── spectra ──────────────────────────────────────────────────────────────

REAL_CASE_MUS = (0.5, 0.9, 0.99, 0.999)


def spectra_suite(samples: int, rng: np.random.Generator) -> List[PropertyResult]:
    suite = "spectra"
    exact_case = PropertyResult(suite, "mu = 0.8: omega = 1.25, rho = 0.25", tolerance=0.0)
    real_case = PropertyResult(suite, "real mu: classical omega, rate = 2 sqrt2 sqrt(1 - mu)",
                               tolerance=0.0)
    brackets = PropertyResult(suite, "theorem bounds bracket 1 - rho")
    contraction = PropertyResult(suite, "rho < 1 off the slit", tolerance=0.0)
    rho_f = PropertyResult(suite, "|1 - omega_opt| = |f(mu)|", tolerance=0.0)
    asymptotics = PropertyResult(suite, "1 - rho ~ 2 sqrt2 sin(delta/2) sqrt|1 - mu|",
                                 tolerance=0.0)

    seg = SegmentSpectrum(0.8)
    exact_case.record_within(abs(optimal_omega(seg) - 1.25), REAL_CASE_TOL)
    exact_case.record_within(optimal_rho(seg) - 0.25, REAL_CASE_TOL)

    for mu in REAL_CASE_MUS:
        seg = SegmentSpectrum(mu)
        classical = 2 / (1 + math.sqrt(1 - mu * mu))
        real_case.record_within(abs(optimal_omega(seg) - classical), REAL_CASE_TOL)
        real_case.record_within(asymptotic_rate(seg) / (2 * SQRT2 * math.sqrt(1 - mu)) - 1, 0.0)

    for _ in range(samples):
        seg = normalize_mu(_sample_disc_point(rng, radius=1.0))
        report = theorem_bounds(seg)
        gap = 1 - report.rho
        brackets.record(min(gap - report.lower_gap, report.upper_gap - gap))
        contraction.record(gap if gap > 0 else -math.inf)
        rho_f.record_within(report.rho - optimal_rho_from_f(seg), 4 * ROUNDOFF_SLACK)

    for theta in (math.pi, math.pi / 2, math.pi / 4):
        for r in (1e-2, 1e-4, 1e-6):
            seg = SegmentSpectrum(1 + cmath.rect(r, theta))
            ratio = (1 - optimal_rho(seg)) / asymptotic_rate(seg)
            asymptotics.record_within(ratio - 1, 10 * math.sqrt(r))

    return [exact_case, real_case, brackets, contraction, rho_f, asymptotics]


# ── sparse_core ──────────────────────────────────────────────────────────

COLORING_NS = (2, 3, 5, 8, 16)


def _oracle_params() -> Iterable[HelmholtzParams]:
    for n in ORACLE_NS:
        for alpha in ORACLE_ALPHAS:
            for k in ORACLE_KS:
                yield HelmholtzParams(N=n, k=k, alpha=alpha)


def _random_complex(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def sparse_core_suite(samples: int, rng: np.random.Generator) -> List[PropertyResult]:
    suite = "sparse_core"
    linearity = PropertyResult(suite, "SOR sweep is linear for b = 0", tolerance=0.0)
    sweep_fixed = PropertyResult(suite, "SOR sweep fixes the solution of Ax = b", tolerance=0.0)
    dense_rho = PropertyResult(suite, "dense rho(L_omega_opt) = |1 - omega_opt|", tolerance=0.0)
    gauss_seidel = PropertyResult(suite, "dense rho(L_1) = rho(J)^2", tolerance=0.0)
    symmetric = PropertyResult(suite, "Jacobi spectrum symmetric about 0", tolerance=0.0)
    power = PropertyResult(suite, "power iteration rho(J) = cos(pi h)", tolerance=0.0)
    fixed_point = PropertyResult(suite, "SOR limit solves Ax = b", tolerance=0.0)
    matvec = PropertyResult(suite, "CSR matvec = dense product", tolerance=0.0)
    coloring = PropertyResult(suite, "red/black coloring of the 5-point matrix", tolerance=0.0)

    for params in _oracle_params():
        matrix = assemble(params)
        report = theorem_bounds(mu_tilde(params))
        dense_rho.record_within(
            dense_spectral_radius(matrix, report.omega_opt) - report.rho, DENSE_RHO_TOL)
        jacobi = dense_jacobi_eigenvalues(matrix)
        rho_j = float(np.max(np.abs(jacobi)))
        gauss_seidel.record_within(
            dense_spectral_radius(matrix, 1.0) - rho_j ** 2, GAUSS_SEIDEL_TOL)
        mirror = np.abs(jacobi[:, None] + jacobi[None, :]).min(axis=1)
        symmetric.record_within(float(mirror.max()), JACOBI_SPECTRUM_TOL)

        x, y = _random_complex(rng, matrix.n), _random_complex(rng, matrix.n)
        cx, cy = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        sweep = sor_operator(matrix, report.omega_opt)
        sx, sy = sweep(x), sweep(y)
        defect = float(np.max(np.abs(sweep(cx * x + cy * y) - (cx * sx + cy * sy))))
        scale = 1.0 + float(np.max(np.abs(cx * sx)) + np.max(np.abs(cy * sy)))
        linearity.record_within(defect, LINEARITY_TOL * scale)

    laplace = assemble(HelmholtzParams(N=8, k=0.0, alpha=0.0))
    estimate = power_spectral_radius(jacobi_operator(laplace), laplace.n, iters=2000)
    power.record_within(estimate - math.cos(math.pi / 9), POWER_TOL)

    damped_params = HelmholtzParams(N=6, k=2 * math.pi, alpha=0.5)
    damped = assemble(damped_params)
    b = rng.random(damped.n).astype(np.complex128)
    omega = theorem_bounds(mu_tilde(damped_params)).omega_opt
    exact = spla.spsolve(damped.csr.tocsc(), b)
    swept = sor_sweep(damped, omega, exact, b)
    sweep_fixed.record_within(
        float(np.linalg.norm(swept - exact) / np.linalg.norm(exact)), SWEEP_FIXED_POINT_TOL)
    x, log = sor_solve(damped, b, SorParams(omega, tol=1e-12, max_iter=5000))
    fixed_point.record_within(
        float(np.linalg.norm(x - exact) / np.linalg.norm(exact)) if log.converged else math.inf,
        1e-8)

    for _ in range(max(1, min(samples, 50))):
        n = int(rng.integers(2, 16))
        entries = [(i, i, complex(1 + rng.random(), rng.random())) for i in range(n)]
        for _ in range(2 * n):
            entries.append((int(rng.integers(n)), int(rng.integers(n)),
                            complex(rng.standard_normal(), rng.standard_normal())))
        matrix = from_triplets(n, entries)
        v = _random_complex(rng, n)
        matvec.record_within(float(np.max(np.abs(matrix.matvec(v) - matrix.to_dense() @ v))),
                             1e-12 * max(1.0, float(np.abs(matrix.values).sum())))

    for n in COLORING_NS:
        ok, colors = verify_2cyclic(assemble(HelmholtzParams(N=n, k=math.pi, alpha=0.25)))
        rows, cols = np.divmod(np.arange(n * n), n)
        coloring.record(1.0 if ok and np.array_equal(colors, (rows + cols) % 2) else -1.0)
    triangle = from_triplets(3, [(i, j, 1.0 + (i == j)) for i in range(3) for j in range(3)])
    coloring.record(1.0 if not verify_2cyclic(triangle)[0] else -1.0)

    return [linearity, sweep_fixed, dense_rho, gauss_seidel, symmetric, power, fixed_point,
            matvec, coloring]


# ── helmholtz_model ──────────────────────────────────────────────────────

TAYLOR_NS = (40, 80, 160, 320)
# Halving h must not grow (exact - leading) / h^4 by more than this factor.
TAYLOR_GROWTH = 1.5


def taylor_remainders(alpha: float = 0.5, k_over_pi: float = 16.0) -> List[float]:
    """| |mu - 1| - leading gap | / h^4 for N in TAYLOR_NS."""
    values = []
    for n in TAYLOR_NS:
        params = HelmholtzParams.from_k_over_pi(n, k_over_pi, alpha)
        diagnostics = mu_diagnostics(params)
        values.append(abs(diagnostics.exact_gap - diagnostics.leading_gap) / params.h ** 4)
    return values


def helmholtz_model_suite(samples: int, rng: np.random.Generator) -> List[PropertyResult]:
    suite = "helmholtz_model"
    spectrum = PropertyResult(suite, "closed-form Jacobi eigenvalues = dense", tolerance=0.0)
    endpoint = PropertyResult(suite, "+/- mu are Jacobi eigenvalues", tolerance=0.0)
    collinear = PropertyResult(suite, "eigenvalues lie on the segment [-mu, mu]", tolerance=0.0)
    leading = PropertyResult(suite, "|mu - 1| matches its h^2 expansion", tolerance=0.0)
    taylor = PropertyResult(suite, "(|mu - 1| - leading) / h^4 bounded as h halves",
                            tolerance=0.0)

    for params in _oracle_params():
        closed = closed_form_jacobi_eigs(params)
        dense = dense_jacobi_eigenvalues(assemble(params))
        mu = mu_tilde(params).mu_tilde
        t_closed = (closed * np.conj(mu)).real
        t_dense = (dense * np.conj(mu)).real
        matched = closed[np.argsort(t_closed, kind="stable")] - dense[np.argsort(t_dense, kind="stable")]
        spectrum.record_within(float(np.max(np.abs(matched))), JACOBI_SPECTRUM_TOL)
        endpoint.record_within(float(np.min(np.abs(closed - mu))), ROUNDOFF_SLACK)
        endpoint.record_within(float(np.min(np.abs(closed + mu))), ROUNDOFF_SLACK)
        t = t_closed / abs(mu) ** 2
        collinear.record_within(float(np.max(np.abs(closed - t * mu))), ROUNDOFF_SLACK)
        collinear.record(ROUNDOFF_SLACK - max(0.0, float(np.max(np.abs(t))) - 1))

    diagnostics = mu_diagnostics(HelmholtzParams.from_k_over_pi(640, 16.0, 0.5))
    leading.record_within(diagnostics.exact_gap / diagnostics.leading_gap - 1, MU_GAP_REL_TOL)

    remainders = taylor_remainders()
    for coarse, fine in zip(remainders, remainders[1:]):
        taylor.record(TAYLOR_GROWTH * coarse - fine)

    return [spectrum, endpoint, collinear, leading, taylor]


SUITES: Dict[str, Callable[[int, np.random.Generator], List[PropertyResult]]] = {
    "complex_analysis": complex_analysis_suite,
    "spectra": spectra_suite,
    "sparse_core": sparse_core_suite,
    "helmholtz_model": helmholtz_model_suite,
}


def run_verification(samples: int, seed: int, suites: Optional[Iterable[str]] = None) -> VerificationReport:
    """Run the named suites (all by default) from one seeded stream."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples!r}")
    names = list(suites) if suites is not None else list(SUITES)
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(unknown)}")

    reset_failures()
    rng = make_rng(seed)
    report = VerificationReport(samples=samples, seed=seed)
    for name in names:
        _log.debug("running suite %s (samples=%d)", name, samples)
        for result in SUITES[name](samples, rng):
            if not result.passed:
                _log.error("property '%s/%s' violated: %d of %d checks, worst slack %.3e",
                           result.suite, result.name, result.violations, result.checks,
                           result.worst_slack)
            report.results.append(result)
    report.logged_failures = failure_count()
    report.failure_messages = failures()
    report.failure_kinds = failure_breakdown()
    return report
