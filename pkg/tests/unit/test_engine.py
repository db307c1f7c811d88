import math
from dataclasses import replace

import numpy as np
import pytest

from app.config import ExperimentSpec
from app.engine import (
    ExperimentRunner,
    GridSample,
    TableRow,
    bounds_grid,
    convergence_curve,
    inspect_helmholtz,
    inspect_mu,
)
from core.helmholtz.model import HelmholtzParams
from core.sparse.iteration import SorParams
from core.sparse.matrix import from_triplets
from core.utils.errors import DomainError, NonConvergentError
from core.utils.logger import failure_count


def _small_spec(**overrides):
    values = {"alphas": (0.5,), "Ns": (8,), "k_over_pi": 2.0, "tol": 1e-8, "max_iter": 5000}
    values.update(overrides)
    return ExperimentSpec(**values)


class TestTable:
    def test_one_row_per_cell_in_spec_order(self):
        result = ExperimentRunner(_small_spec(alphas=(0.5, 0.25), Ns=(4, 8))).run_table()
        assert [(row.alpha, row.N) for row in result.rows] == [(0.5, 4), (0.5, 8), (0.25, 4), (0.25, 8)]
        assert result.all_converged
        assert result.warnings == []

    def test_row_contents(self):
        row = ExperimentRunner(_small_spec()).run_table().rows[0]
        assert row.k == pytest.approx(2 * math.pi)
        assert row.converged
        assert 0 < row.rho_formula < 1
        assert row.measured_rate < 1
        assert isinstance(row.predicted_iterations, int)
        assert row.brackets_rate(1e-12)
        assert row.values() == [getattr(row, name) for name in TableRow.columns()]

    def test_threaded_run_matches_serial(self):
        spec = _small_spec(alphas=(0.5, 0.25), Ns=(4, 6, 8))
        serial = ExperimentRunner(spec).run_table()
        threaded = ExperimentRunner(replace(spec, jobs=3)).run_table()
        assert threaded.rows == serial.rows

    def test_same_seed_same_iterations(self):
        first = ExperimentRunner(_small_spec(seed=5)).run_table().rows[0]
        second = ExperimentRunner(_small_spec(seed=5)).run_table().rows[0]
        assert first == second

    def test_failed_phase_becomes_a_warning(self, monkeypatch):
        def stalled(seg, tol):
            raise NonConvergentError("stalled")

        monkeypatch.setattr("app.engine.predicted_iterations", stalled)
        result = ExperimentRunner(_small_spec()).run_table()

        row = result.rows[0]
        assert row.predicted_iterations is None
        assert row.converged
        assert result.warnings == [{
            "alpha": 0.5,
            "N": 8,
            "phase": "predicted_iterations",
            "message": "stalled",
            "exception_type": "NonConvergentError",
        }]
        assert failure_count() == 1


class TestCurve:
    def test_curve_history(self):
        curve = ExperimentRunner(_small_spec()).run_curve(0.5, 8)
        points = curve.points()
        assert curve.log.converged
        assert points[0][0] == 1
        assert len(points) == curve.log.iterations
        assert points[-1][1] <= 1e-8
        assert curve.seed == 0

    def test_one_sweep_for_a_diagonal_system(self):
        matrix = from_triplets(2, [(0, 0, 2), (1, 1, 1j)])
        assert convergence_curve(matrix, np.array([2.0, 1j]), SorParams(1.0)) == [(1, 0.0)]


class TestBoundsGrid:
    def test_grid_skips_one_and_flags_the_slit(self):
        samples = bounds_grid((0.0, 2.0), (-1.0, 1.0), 3)
        coords = [(s.re, s.im) for s in samples]
        assert len(samples) == 8
        assert (1.0, 0.0) not in coords
        assert coords[0] == (0.0, -1.0)

        slit = samples[coords.index((2.0, 0.0))]
        assert slit.abs_f == 1.0
        assert slit.lower == slit.upper == 0.0

    def test_bounds_bracket_the_gap(self):
        for sample in bounds_grid((0.0, 3.0), (-2.0, 2.0), 9):
            if sample.im == 0 and sample.re >= 1:
                continue
            assert sample.lower - 1e-12 <= 1 - sample.abs_f <= sample.upper + 1e-12

    def test_single_point(self):
        samples = bounds_grid((0.5, 0.5), (0.5, 0.5), 1)
        assert len(samples) == 1
        assert isinstance(samples[0], GridSample)

    @pytest.mark.parametrize("args", [
        ((0.0, 1.0), (0.0, 1.0), 0),
        ((-0.5, 1.0), (0.0, 1.0), 5),
        ((1.0, 0.0), (0.0, 1.0), 5),
    ])
    def test_invalid(self, args):
        with pytest.raises(DomainError):
            bounds_grid(*args)


class TestInspect:
    def test_real_endpoint(self):
        data = inspect_mu(0.8)
        assert data["rho"] == pytest.approx(0.25)
        assert data["predicted_iterations"] == 10
        assert data["rate"] == pytest.approx(math.log(4))
        assert not data["on_slit"]

    def test_sign_is_normalized(self):
        assert inspect_mu(-0.8)["mu_tilde"] == 0.8

    def test_helmholtz_report(self):
        data = inspect_helmholtz(HelmholtzParams(N=8, k=2 * math.pi, alpha=0.5), 1e-6)
        assert data["N"] == 8
        assert data["kh"] == pytest.approx(2 * math.pi / 9)
        assert "mu_diagnostics" in data
        assert data["expected_rate"] == pytest.approx(0.5 * 2 * math.pi / 9 / math.sqrt(2))
        assert data["predicted_iterations"] >= 1

    def test_laplace_report_has_no_diagnostics(self):
        data = inspect_helmholtz(HelmholtzParams(N=8, k=0.0, alpha=0.0), 1e-6)
        assert "mu_diagnostics" not in data
        assert "expected_rate" not in data
        assert data["rho"] < 1
