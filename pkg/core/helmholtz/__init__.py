"""Damped Helmholtz model problem: assembly, closed-form Jacobi spectrum, segment endpoint."""

# ruff: noqa: F401

from core.helmholtz.model import (
    HelmholtzParams,
    MuDiagnostics,
    assemble,
    closed_form_jacobi_eigs,
    mu_tilde,
    mu_diagnostics,
    expected_rate,
)
