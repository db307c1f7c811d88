"""Damped Helmholtz model problem on the unit square.

    -Laplace(u) - (1 - i alpha) k^2 u = f,   u = 0 on the boundary

discretized with the 5-point stencil on an N x N interior grid, h = 1/(N+1),
unknowns in lexicographic (row-major) order. The assembled matrix is scaled by
h^2: diagonal 4 - (1 - i alpha) k^2 h^2, off-diagonals -1.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from core.analysis.spectra import SegmentSpectrum, normalize_mu
from core.sparse.matrix import SparseMatrix
from core.utils.constants import POLLUTION_KH
from core.utils.errors import DomainError, SingularDiagonalError
from core.utils.logger import get_logger

_log = get_logger(__name__)


@dataclass(frozen=True)
class HelmholtzParams:
    N: int
    k: float
    alpha: float

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be an integer >= 1, got {self.N!r}")
        if not (math.isfinite(self.k) and self.k >= 0):
            raise DomainError(f"k must be finite and >= 0, got {self.k!r}")
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise DomainError(f"alpha must be finite and >= 0, got {self.alpha!r}")
        object.__setattr__(self, "N", int(self.N))

    @classmethod
    def from_k_over_pi(cls, N: int, k_over_pi: float, alpha: float) -> "HelmholtzParams":
        return cls(N=N, k=k_over_pi * math.pi, alpha=alpha)

    @property
    def h(self) -> float:
        return 1.0 / (self.N + 1)

    @property
    def gamma(self) -> complex:
        """Complex shift (1 - i alpha) k^2 / 4; Im(gamma) <= 0 for alpha >= 0."""
        return (1 - 1j * self.alpha) * self.k ** 2 / 4

    @property
    def sigma(self) -> complex:
        """Diagonal shift of the scaled stencil, (1 - i alpha) k^2 h^2."""
        return (1 - 1j * self.alpha) * self.k ** 2 * self.h ** 2

    @property
    def dimension(self) -> int:
        return self.N * self.N

    @property
    def pollution_ok(self) -> bool:
        return self.k * self.h <= POLLUTION_KH


def _diagonal_value(p: HelmholtzParams) -> complex:
    diag = 4 - p.sigma
    if diag == 0:
        raise SingularDiagonalError(f"4 - (1 - i alpha) k^2 h^2 vanishes for {p}")
    return diag


def assemble(p: HelmholtzParams) -> SparseMatrix:
    """N^2 x N^2 h^2-scaled 5-point matrix in lexicographic order."""
    diag = _diagonal_value(p)
    if not p.pollution_ok:
        _log.warning("kh = %.4f exceeds pi/5 for N=%d, k=%.4f: pollution error expected",
                     p.k * p.h, p.N, p.k)
    n = p.N
    neighbours = sp.diags([-1.0, -1.0], [-1, 1], shape=(n, n))
    eye = sp.identity(n)
    off_diagonal = sp.kron(eye, neighbours) + sp.kron(neighbours, eye)
    matrix = off_diagonal.astype(np.complex128) + diag * sp.identity(n * n, dtype=np.complex128)
    _log.debug("assembled Helmholtz matrix N=%d (n=%d, nnz=%d)", n, n * n, matrix.nnz)
    return SparseMatrix.from_scipy(matrix)


def closed_form_jacobi_eigs(p: HelmholtzParams) -> np.ndarray:
    """lambda_{j,l} = 2 (cos(j pi h) + cos(l pi h)) / (4 - (1 - i alpha) k^2 h^2), flattened."""
    diag = _diagonal_value(p)
    theta = np.arange(1, p.N + 1) * math.pi * p.h
    cosines = np.cos(theta)
    return (2 * (cosines[:, None] + cosines[None, :]) / diag).ravel()


def mu_tilde(p: HelmholtzParams) -> SegmentSpectrum:
    """Segment endpoint cos(pi h) / (1 - gamma h^2), normalized to Re >= 0."""
    denominator = 1 - p.gamma * p.h ** 2
    if denominator == 0:
        raise DomainError(f"1 - gamma h^2 vanishes for {p}")
    return normalize_mu(math.cos(math.pi * p.h) / denominator)


@dataclass(frozen=True)
class MuDiagnostics:
    exact_gap: float
    exact_arg: float
    leading_gap: float
    leading_arg: float
    near_resonance: bool


def mu_diagnostics(p: HelmholtzParams) -> MuDiagnostics:
    """Exact |mu - 1|, |Arg(mu - 1)| next to their leading-order h^2 expansions.

    mu - 1 = (gamma - pi^2/2) h^2 + O(h^4), so the leading gap is
    (k^2/4) sqrt(alpha^2 + (1 - 2 pi^2/k^2)^2) h^2 and, for k^2 > 2 pi^2, the
    leading arg is atan|alpha / (1 - 2 pi^2 / k^2)|. At k^2 = 2 pi^2 the arg
    takes its limit pi/2 and the result is flagged.
    """
    if not p.k > 0:
        raise DomainError("mu diagnostics need k > 0")
    mu = mu_tilde(p).mu_tilde
    exact = mu - 1
    leading = (p.gamma - math.pi ** 2 / 2) * p.h ** 2
    near_resonance = math.isclose(p.k ** 2, 2 * math.pi ** 2, rel_tol=1e-12)
    if near_resonance:
        _log.warning("k^2 = 2 pi^2: leading arg of mu - 1 taken as its limit pi/2")
        leading_arg = math.pi / 2
    else:
        leading_arg = abs(cmath.phase(leading))
    return MuDiagnostics(
        exact_gap=abs(exact),
        exact_arg=abs(cmath.phase(exact)) if exact != 0 else 0.0,
        leading_gap=abs(leading),
        leading_arg=leading_arg,
        near_resonance=near_resonance,
    )


def expected_rate(p: HelmholtzParams) -> float:
    """Asymptotic rate alpha k h / sqrt(2), valid for alpha, h << 1 and k^2 >> 2 pi^2."""
    if not (p.k > 0 and p.alpha > 0):
        raise DomainError("expected rate needs k > 0 and alpha > 0")
    return p.alpha * p.k * p.h / math.sqrt(2)
