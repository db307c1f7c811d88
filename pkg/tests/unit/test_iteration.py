import math

import numpy as np
import pytest
import scipy.sparse.linalg as spla

from core.analysis.spectra import optimal_omega
from core.helmholtz.model import HelmholtzParams, assemble, mu_tilde
from core.sparse.iteration import (
    ConvergenceLog,
    SorParams,
    jacobi_operator,
    jacobi_sweep,
    sor_operator,
    sor_solve,
    sor_sweep,
)
from core.sparse.matrix import from_triplets
from core.sparse.spectral import dense_sor_matrix
from core.utils.errors import DomainError, MatrixSizeError, ZeroVectorError
from core.utils.logger import failure_count


def _helmholtz(n=4, k=2 * math.pi, alpha=0.5):
    params = HelmholtzParams(N=n, k=k, alpha=alpha)
    return params, assemble(params)


def _omega(params):
    return optimal_omega(mu_tilde(params))


class TestSorParams:
    def test_omega_is_complex(self):
        assert isinstance(SorParams(1).omega, complex)

    @pytest.mark.parametrize("kwargs", [{"tol": 0}, {"tol": -1e-6}, {"max_iter": 0}])
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            SorParams(1.0, **kwargs)


class TestSweeps:
    def test_gauss_seidel_step(self):
        matrix = from_triplets(2, [(0, 0, 4), (0, 1, -1), (1, 0, -1), (1, 1, 4)])
        x = sor_sweep(matrix, 1.0, np.zeros(2), np.array([1.0, 2.0]))
        np.testing.assert_allclose(x, [0.25, 0.5625])

    def test_sweep_with_zero_rhs_applies_iteration_matrix(self):
        _, matrix = _helmholtz(n=3)
        omega = 1.3 + 0.2j
        rng = np.random.default_rng(1)
        x = rng.standard_normal(matrix.n) + 1j * rng.standard_normal(matrix.n)
        expected = dense_sor_matrix(matrix, omega) @ x
        np.testing.assert_allclose(sor_operator(matrix, omega)(x), expected, atol=1e-12)

    @pytest.mark.parametrize("omega", [1.0, 1.3 + 0.2j])
    def test_sweep_is_linear_for_zero_rhs(self, omega):
        _, matrix = _helmholtz(n=6)
        sweep = sor_operator(matrix, omega)
        rng = np.random.default_rng(7)
        x, y = (rng.standard_normal(matrix.n) + 1j * rng.standard_normal(matrix.n) for _ in range(2))
        a, b = 0.7 - 1.1j, -2.0 + 0.4j
        np.testing.assert_allclose(sweep(a * x + b * y), a * sweep(x) + b * sweep(y), atol=1e-12)

    def test_sweep_fixes_the_solution(self):
        _, matrix = _helmholtz(n=5)
        b = np.arange(1, matrix.n + 1, dtype=np.complex128)
        exact = spla.spsolve(matrix.csr.tocsc(), b)
        swept = sor_sweep(matrix, 1.4 - 0.1j, exact, b)
        assert np.linalg.norm(swept - exact) <= 1e-12 * np.linalg.norm(exact)

    def test_sweep_does_not_modify_input(self):
        _, matrix = _helmholtz(n=3)
        x = np.ones(matrix.n, dtype=np.complex128)
        sor_sweep(matrix, 1.2, x, np.ones(matrix.n))
        np.testing.assert_array_equal(x, np.ones(matrix.n))

    def test_jacobi_operator(self):
        _, matrix = _helmholtz(n=3)
        a = matrix.to_dense()
        jacobi = np.eye(matrix.n) - a / np.diag(a)[:, None]
        x = np.arange(matrix.n, dtype=np.complex128)
        np.testing.assert_allclose(jacobi_operator(matrix)(x), jacobi @ x, atol=1e-12)

    def test_jacobi_sweep_fixed_point(self):
        _, matrix = _helmholtz(n=3)
        b = np.ones(matrix.n, dtype=np.complex128)
        exact = np.linalg.solve(matrix.to_dense(), b)
        np.testing.assert_allclose(jacobi_sweep(matrix, exact, b), exact, atol=1e-12)

    def test_length_mismatch(self):
        _, matrix = _helmholtz(n=3)
        with pytest.raises(MatrixSizeError):
            sor_sweep(matrix, 1.0, np.zeros(4), np.zeros(matrix.n))


class TestSolve:
    def test_diagonal_matrix_converges_in_one_sweep(self):
        matrix = from_triplets(3, [(0, 0, 2), (1, 1, 4j), (2, 2, -1)])
        b = np.array([2.0, 4.0, 1.0])
        x, log = sor_solve(matrix, b, SorParams(1.0))
        assert log.converged
        assert log.iterations == 1
        np.testing.assert_allclose(x, [1.0, -1j, -1.0])

    def test_converges_to_direct_solution(self):
        params, matrix = _helmholtz(n=8)
        omega = _omega(params)
        b = np.random.default_rng(0).random(matrix.n).astype(np.complex128)
        x, log = sor_solve(matrix, b, SorParams(omega, tol=1e-10))
        assert log.converged
        assert log.final_residual <= 1e-10
        exact = spla.spsolve(matrix.csr.tocsc(), b)
        np.testing.assert_allclose(x, exact, rtol=0, atol=1e-7 * np.linalg.norm(exact))

    def test_initial_guess_is_not_modified(self):
        params, matrix = _helmholtz(n=3)
        x0 = np.full(matrix.n, 0.5, dtype=np.complex128)
        sor_solve(matrix, np.ones(matrix.n), SorParams(_omega(params), tol=1e-8), x0=x0)
        np.testing.assert_array_equal(x0, np.full(matrix.n, 0.5))

    def test_zero_rhs(self):
        _, matrix = _helmholtz(n=3)
        with pytest.raises(ZeroVectorError):
            sor_solve(matrix, np.zeros(matrix.n), SorParams(1.0))

    def test_iteration_cap_reports_non_convergence(self):
        _, matrix = _helmholtz(n=8)
        _, log = sor_solve(matrix, np.ones(matrix.n), SorParams(1.0, tol=1e-14, max_iter=3))
        assert not log.converged
        assert log.iterations == 3
        assert failure_count() == 1

    def test_one_residual_per_sweep(self):
        params, matrix = _helmholtz(n=4)
        _, log = sor_solve(matrix, np.ones(matrix.n), SorParams(_omega(params), tol=1e-8))
        assert log.converged
        assert len(log.residuals) == log.iterations
        assert all(r > 1e-8 for r in log.residuals[:-1])


class TestConvergenceLog:
    def test_empty(self):
        log = ConvergenceLog()
        assert log.iterations == 0
        assert math.isnan(log.final_residual)
        assert math.isnan(log.tail_contraction())

    def test_geometric_sequence(self):
        log = ConvergenceLog(residuals=[0.5 ** k for k in range(10)])
        assert log.tail_contraction() == pytest.approx(0.5)
        assert log.tail_contraction(window=3) == pytest.approx(0.5)

    def test_window_uses_only_the_tail(self):
        log = ConvergenceLog(residuals=[1.0, 0.1, 0.05, 0.025])
        assert log.tail_contraction(window=2) == pytest.approx(0.5)

    def test_exact_zero_start(self):
        assert ConvergenceLog(residuals=[0.0, 0.0]).tail_contraction() == 0.0
