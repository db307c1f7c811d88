"""Shared utilities: logging, errors, constants, version, JSON encoding, seeded RNG."""

# ruff: noqa: F401

from core.utils.encoding import ComplexEncoder
from core.utils.version import __version__, APP_NAME
from core.utils.logger import (
    get_logger,
    failure_count,
    failures,
    reset_failures,
)
from core.utils.errors import (
    SorError,
    DomainError,
    SingularDiagonalError,
    IndexOutOfRangeError,
    MatrixSizeError,
    NonConvergentError,
    ZeroVectorError,
)
from core.utils.constants import (
    DEFAULT_TOL,
    DEFAULT_MAX_ITER,
    DEFAULT_NS,
    LARGE_N,
    TABLE_ALPHAS,
    DENSE_ORACLE_MAX_N,
    ROUNDOFF_SLACK,
    REFERENCE_ITERATIONS,
    reference_iterations,
)
from core.utils.rng import PRNG_NAME, make_rng, random_rhs
