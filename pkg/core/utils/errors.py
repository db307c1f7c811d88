"""Exception hierarchy for solver, spectrum and assembly failures.

Every error carries a stable ``code`` so callers (the CLI, the experiment
engine) can report it in the same ``{"code", "message", "exception_type"}``
shape without string matching on messages.
"""
from __future__ import annotations

from typing import Dict


class SorError(Exception):
    """Base class for all library errors."""

    code = "sor_error"

    def to_dict(self) -> Dict[str, str]:
        return {
            "code": self.code,
            "message": str(self) or type(self).__name__,
            "exception_type": type(self).__name__,
        }


class DomainError(SorError, ValueError):
    """Argument outside the domain of a formula (z = 1, R < 0, Re(z) < 0...)."""

    code = "domain_error"


class SingularDiagonalError(SorError, ValueError):
    """A diagonal entry is missing or exactly zero, so D is singular."""

    code = "singular_diagonal"


class IndexOutOfRangeError(SorError, IndexError):
    code = "index_out_of_range"


class MatrixSizeError(SorError, ValueError):
    """Matrix too large for a dense operation, or dimensions disagree."""

    code = "matrix_size"


class NonConvergentError(SorError):
    """The iteration cannot converge (spectral radius >= 1)."""

    code = "non_convergent"


class ZeroVectorError(SorError, ValueError):
    code = "zero_vector"
