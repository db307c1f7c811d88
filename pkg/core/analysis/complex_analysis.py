"""Scalar complex functions behind the optimal-SOR convergence bounds.

With ``s(z) = sqrt(1 - z^2)`` on the principal branch,

    f(z) = 2 / (1 + s(z)) - 1        (so |f(mu)| is the optimal SOR radius)
    g(z) = 1 - 2 sqrt(2 (1 - z))     (|1 - g(z)| = 2 sqrt(2) sqrt|1 - z|)

and for ``Re(z) >= 0``, ``z != 1``, ``R = |z - 1|``, ``delta = |Arg(z - 1)|``:

    c_R |1 - g| <= |f - 1| <= |1 - g|
    c*_R sin(delta/2 + beta_m) |1 - g| <= 1 - |f| <= sin(delta/2 + beta_M) |1 - g|

All functions are pure and operate on Python ``complex`` values.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Tuple

from core.utils.errors import DomainError

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class LemmaBounds:
    """Two-sided bound on ``1 - |f(z)|`` and the quantities it is built from."""

    lower: float
    upper: float
    delta: float
    radius: float
    beta_m: float
    beta_M: float
    gap: float  # |1 - g(z)|


def _as_complex(z) -> complex:
    w = complex(z)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DomainError(f"non-finite argument {w!r}")
    return w


def _require_right_half_plane(z: complex) -> None:
    if z.real < 0:
        raise DomainError(f"Re(z) must be >= 0, got {z!r}")


def _require_not_one(z: complex) -> None:
    if z == 1:
        raise DomainError("z = 1: Arg(z - 1) is undefined")


def is_on_slit(z) -> bool:
    """True when z lies on the real ray [1, inf); exact test, no tolerance band."""
    w = complex(z)
    return w.imag == 0 and w.real >= 1


def principal_arg(z) -> float:
    """Arg(z) in (-pi, pi]; the negative real axis maps to +pi."""
    w = _as_complex(z)
    if w == 0:
        raise DomainError("Arg(0) is undefined")
    if w.imag == 0 and w.real < 0:
        # cmath.phase returns -pi for a negative-zero imaginary part.
        return math.pi
    return cmath.phase(w)


def principal_sqrt(z) -> complex:
    """Square root with Re(w) >= 0 and the cut on the negative real axis.

    Points on the cut take the root with Im(w) > 0 whatever the sign of the
    zero imaginary part.
    """
    w = _as_complex(z)
    if w.imag == 0 and w.real < 0:
        return complex(0.0, math.sqrt(-w.real))
    return cmath.sqrt(w)


def _s(z: complex) -> complex:
    # (1 - z)(1 + z) keeps relative accuracy near z = 1 where 1 - z*z cancels.
    return principal_sqrt((1 - z) * (1 + z))


def f_map(z) -> complex:
    """f(z) = 2 / (1 + sqrt(1 - z^2)) - 1; equals omega_opt - 1 for z = mu."""
    w = _as_complex(z)
    _require_right_half_plane(w)
    s = _s(w)
    return 2 / (1 + s) - 1


def g_map(z) -> complex:
    """g(z) = 1 - 2 sqrt(2 (1 - z))."""
    w = _as_complex(z)
    return 1 - 2 * principal_sqrt(2 * (1 - w))


def p_map(z) -> complex:
    """p(z) = (1 + z)^(-1/2) + (1 - z)^(1/2); |f - 1| / |1 - g| = 1 / (sqrt(2) |p|)."""
    w = _as_complex(z)
    _require_right_half_plane(w)
    return 1 / principal_sqrt(1 + w) + principal_sqrt(1 - w)


def c_R(R: float) -> float:
    """Lower constant of the |f - 1| sandwich; decreasing in R, c_0 = 1."""
    if R < 0 or not math.isfinite(R):
        raise DomainError(f"R must be a finite value >= 0, got {R!r}")
    if R <= 1:
        return 1 / (SQRT2 * (1 / math.sqrt(2 - R) + math.sqrt(R)))
    return 1 / (SQRT2 * (1 / math.sqrt(R) + math.sqrt(R)))


def c_R_star(R: float) -> float:
    """c*_R = c_R / (1 + sqrt(R (2 + R))); c*_R <= c_R, c*_0 = 1."""
    return c_R(R) / (1 + math.sqrt(R * (2 + R)))


def ratio_fg(z) -> float:
    """|f(z) - 1| / |1 - g(z)|, evaluated directly from f_map and g_map."""
    w = _as_complex(z)
    _require_right_half_plane(w)
    if w == 1:
        raise DomainError("ratio |f - 1| / |1 - g| is 0/0 at z = 1")
    return abs(f_map(w) - 1) / abs(1 - g_map(w))


def _beta_bound(z: complex, tight: bool) -> float:
    if tight:
        return 0.5 * math.atan(abs(z.imag / (1 + z.real)))
    return 0.5 * math.atan(abs(z.imag))


def beta_interval(z, tight: bool = False) -> Tuple[float, float]:
    """(beta_m, beta_M): minimizer and maximizer of sin(delta/2 + beta) on [0, B].

    B = atan|Im z| / 2, or atan|Im z / (1 + Re z)| / 2 when *tight*. For
    Re(z) >= 0, delta/2 + B <= pi/2, so
    the sine increases on the interval and the extremes are its endpoints.
    """
    w = _as_complex(z)
    _require_right_half_plane(w)
    _require_not_one(w)
    return 0.0, _beta_bound(w, tight)


def lemma_bounds(z, tight: bool = False) -> LemmaBounds:
    """Lower/upper bounds on ``1 - |f(z)|`` with R = |z - 1| (the tightest choice)."""
    w = _as_complex(z)
    _require_right_half_plane(w)
    _require_not_one(w)
    radius = abs(w - 1)
    delta = abs(principal_arg(w - 1))
    beta_m, beta_M = beta_interval(w, tight=tight)
    gap = abs(1 - g_map(w))
    lower = c_R_star(radius) * math.sin(delta / 2 + beta_m) * gap
    upper = math.sin(delta / 2 + beta_M) * gap
    return LemmaBounds(
        lower=lower,
        upper=upper,
        delta=delta,
        radius=radius,
        beta_m=beta_m,
        beta_M=beta_M,
        gap=gap,
    )
