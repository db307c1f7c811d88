"""Experiment engine: iteration tables, convergence curves, bound grids and
parameter inspection for SOR with the optimal complex relaxation parameter.

:class:`ExperimentRunner` plays the orchestrator role. Each table cell runs the
same pipeline (assemble, segment endpoint, bounds, solve) and best-effort
phases are isolated so a failure in one never discards the solve result.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.config import ExperimentSpec
from core.analysis.complex_analysis import f_map, is_on_slit, lemma_bounds, ratio_fg
from core.analysis.spectra import (
    BoundReport,
    SegmentSpectrum,
    convergence_rate,
    normalize_mu,
    predicted_iterations,
    theorem_bounds,
)
from core.helmholtz.model import (
    HelmholtzParams,
    assemble,
    expected_rate,
    mu_diagnostics,
    mu_tilde,
)
from core.sparse.iteration import ConvergenceLog, SorParams, sor_solve
from core.sparse.matrix import SparseMatrix
from core.utils.constants import CONTRACTION_WINDOW, DEFAULT_TOL
from core.utils.errors import DomainError
from core.utils.logger import get_logger
from core.utils.rng import random_rhs

logger = get_logger(__name__)


@dataclass(frozen=True)
class TableRow:
    alpha: float
    N: int
    k: float
    iterations: int
    predicted_iterations: Optional[int]
    rho_formula: float
    measured_rate: float
    lower_gap: float
    upper_gap: float
    converged: bool

    @classmethod
    def columns(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    def values(self) -> List[Any]:
        return [getattr(self, name) for name in self.columns()]

    def brackets_rate(self, slack: float = 0.0) -> bool:
        gap = 1.0 - self.rho_formula
        return self.lower_gap - slack <= gap <= self.upper_gap + slack


@dataclass
class TableResult:
    spec: ExperimentSpec
    rows: List[TableRow] = field(default_factory=list)
    warnings: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def all_converged(self) -> bool:
        return all(row.converged for row in self.rows)


@dataclass
class CurveResult:
    params: HelmholtzParams
    report: BoundReport
    log: ConvergenceLog
    seed: int

    def points(self) -> List[Tuple[int, float]]:
        return convergence_curve_points(self.log)


@dataclass(frozen=True)
class GridSample:
    re: float
    im: float
    abs_f: float
    ratio_fg: float
    lower: float
    upper: float

    @classmethod
    def columns(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    def values(self) -> List[Any]:
        return [getattr(self, name) for name in self.columns()]


def convergence_curve_points(log: ConvergenceLog) -> List[Tuple[int, float]]:
    """(iteration, relative residual) pairs, iterations counted from 1."""
    return [(i, r) for i, r in enumerate(log.residuals, start=1)]


def convergence_curve(matrix: SparseMatrix, b, params: SorParams) -> List[Tuple[int, float]]:
    """Solve from a zero guess and return one (iteration, residual) pair per sweep."""
    _, log = sor_solve(matrix, b, params)
    return convergence_curve_points(log)


def _axis(bounds: Sequence[float], resolution: int) -> np.ndarray:
    lo, hi = float(bounds[0]), float(bounds[1])
    if hi < lo:
        raise DomainError(f"range must be increasing, got {bounds!r}")
    if resolution == 1:
        return np.array([lo])
    return np.linspace(lo, hi, resolution)


def bounds_grid(
    re_range: Sequence[float],
    im_range: Sequence[float],
    resolution: int,
    tight: bool = False,
) -> List[GridSample]:
    """Sample |f|, the |f - 1| / |1 - g| ratio and the lemma bounds on a grid.

    Rows run over the real part first (outer loop), then the imaginary part.
    z = 1 is skipped; slit points report |f| = 1 and zero bounds.
    """
    if resolution < 1:
        raise DomainError(f"resolution must be >= 1, got {resolution!r}")
    if re_range[0] < 0:
        raise DomainError(f"grid must lie in Re(z) >= 0, got re_range={re_range!r}")
    samples: List[GridSample] = []
    for re in _axis(re_range, resolution):
        for im in _axis(im_range, resolution):
            z = complex(float(re), float(im))
            if z == 1:
                logger.warning("bounds grid: skipping z = 1 (bounds undefined)")
                continue
            if is_on_slit(z):
                samples.append(GridSample(z.real, z.imag, 1.0, ratio_fg(z), 0.0, 0.0))
                continue
            bounds = lemma_bounds(z, tight=tight)
            samples.append(GridSample(
                re=z.real,
                im=z.imag,
                abs_f=abs(f_map(z)),
                ratio_fg=ratio_fg(z),
                lower=bounds.lower,
                upper=bounds.upper,
            ))
    logger.debug("bounds grid: %d samples at resolution %d", len(samples), resolution)
    return samples


def _report_dict(seg: SegmentSpectrum, report: BoundReport) -> Dict[str, Any]:
    data = asdict(report)
    data["mu_tilde"] = seg.mu_tilde
    data["on_slit"] = seg.on_slit
    data["rate"] = convergence_rate(report.rho) if report.rho < 1 else 0.0
    return data


def inspect_mu(mu, tol: float = DEFAULT_TOL, tight: bool = False) -> Dict[str, Any]:
    """Bound report for a segment endpoint given directly (either sign)."""
    seg = normalize_mu(mu)
    report = theorem_bounds(seg, tight=tight)
    data = _report_dict(seg, report)
    data["predicted_iterations"] = predicted_iterations(seg, tol) if report.rho < 1 else None
    return data


def inspect_helmholtz(params: HelmholtzParams, tol: float, tight: bool = False) -> Dict[str, Any]:
    """Bound report plus model diagnostics for one Helmholtz configuration."""
    seg = mu_tilde(params)
    report = theorem_bounds(seg, tight=tight)
    data = _report_dict(seg, report)
    data.update(
        N=params.N,
        k=params.k,
        alpha=params.alpha,
        h=params.h,
        kh=params.k * params.h,
        pollution_ok=params.pollution_ok,
        predicted_iterations=predicted_iterations(seg, tol) if report.rho < 1 else None,
    )
    if params.k > 0:
        data["mu_diagnostics"] = asdict(mu_diagnostics(params))
    if params.k > 0 and params.alpha > 0:
        data["expected_rate"] = expected_rate(params)
    return data


class ExperimentRunner:
    """Runs the experiments described by an :class:`ExperimentSpec`."""

    def __init__(self, spec: ExperimentSpec):
        self.spec = spec

    # ── Tables ───────────────────────────────────────────────────────────

    def cells(self) -> List[Tuple[float, int]]:
        return [(alpha, n) for alpha in self.spec.alphas for n in self.spec.grid_sizes]

    def run_table(self) -> TableResult:
        """One row per (alpha, N), in spec order whatever the completion order."""
        cells = self.cells()
        logger.debug("run_table: %d cells, k/pi=%g, jobs=%d",
                     len(cells), self.spec.k_over_pi, self.spec.jobs)
        if self.spec.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.spec.jobs) as pool:
                outcomes = list(pool.map(lambda cell: self.run_cell(*cell), cells))
        else:
            outcomes = [self.run_cell(*cell) for cell in cells]

        result = TableResult(spec=self.spec)
        for row, cell_warnings in outcomes:
            result.rows.append(row)
            result.warnings.extend(cell_warnings)
        return result

    def run_cell(self, alpha: float, n: int) -> Tuple[TableRow, List[Dict[str, Any]]]:
        params = HelmholtzParams.from_k_over_pi(n, self.spec.k_over_pi, alpha)
        matrix = assemble(params)
        seg = mu_tilde(params)
        report = theorem_bounds(seg)
        b = random_rhs(matrix.n, self.spec.seed)
        sor = SorParams(report.omega_opt, tol=self.spec.tol, max_iter=self.spec.max_iter)
        _, log = sor_solve(matrix, b, sor)

        warnings: List[Dict[str, Any]] = []
        predicted = self._run_phase(
            warnings, (alpha, n), "predicted_iterations",
            lambda: predicted_iterations(seg, self.spec.tol))
        row = TableRow(
            alpha=alpha,
            N=n,
            k=params.k,
            iterations=log.iterations,
            predicted_iterations=predicted,
            rho_formula=report.rho,
            measured_rate=log.tail_contraction(CONTRACTION_WINDOW),
            lower_gap=report.lower_gap,
            upper_gap=report.upper_gap,
            converged=log.converged,
        )
        logger.debug("cell alpha=%g N=%d: %d sweeps (rho=%.6f, measured=%.6f)",
                     alpha, n, row.iterations, row.rho_formula, row.measured_rate)
        return row, warnings

    @staticmethod
    def _run_phase(warnings: List[Dict[str, Any]], cell: Tuple[float, int],
                   phase_name: str, fn: Callable[[], Any]) -> Any:
        """Run a best-effort phase of a cell; record a warning instead of raising."""
        try:
            return fn()
        except KeyboardInterrupt:
            raise
        except Exception as exc:
            logger.warning("Table phase '%s' failed for alpha=%g, N=%d: %s",
                           phase_name, cell[0], cell[1], exc)
            warnings.append({
                "alpha": cell[0],
                "N": cell[1],
                "phase": phase_name,
                "message": str(exc) or type(exc).__name__,
                "exception_type": type(exc).__name__,
            })
            return None

    # ── Curves ───────────────────────────────────────────────────────────

    def run_curve(self, alpha: float, n: int) -> CurveResult:
        """Full residual history for one cell at the optimal complex omega."""
        params = HelmholtzParams.from_k_over_pi(n, self.spec.k_over_pi, alpha)
        matrix = assemble(params)
        report = theorem_bounds(mu_tilde(params))
        b = random_rhs(matrix.n, self.spec.seed)
        sor = SorParams(report.omega_opt, tol=self.spec.tol, max_iter=self.spec.max_iter)
        _, log = sor_solve(matrix, b, sor)
        return CurveResult(params=params, report=report, log=log, seed=self.spec.seed)
