"""Shared numerical tolerance conventions.

A Hermitian matrix is accepted as positive semidefinite iff its minimum
eigenvalue is >= -tol * max(1, largest absolute eigenvalue).  All modules
route PSD decisions through this convention so that verdicts are comparable
across the library.  The default can be overridden with the ``SYMWIT_TOL``
environment variable.
"""

from __future__ import annotations

import os

# Relative PSD acceptance tolerance (scale = max(1, spectral radius)).
DEFAULT_PSD_TOL = 1e-9

# Hermiticity is required to max|A - A*| <= HERMITIAN_TOL * max|A|.
HERMITIAN_TOL = 1e-12

# Symmetric-subspace support: max|P A P - A| <= SUPPORT_TOL * max|A|.
SUPPORT_TOL = 1e-10

# Verdicts whose deciding margin falls inside this (relative) band are
# reported as marginal rather than silently binarized.
MARGINAL_BAND = 1e-8

# Default tolerance for conic feasibility solves.
DEFAULT_SOLVER_TOL = 1e-7

_ENV_VAR = "SYMWIT_TOL"


def default_psd_tol() -> float:
    """PSD tolerance, honoring the ``SYMWIT_TOL`` environment override."""
    raw = os.environ.get(_ENV_VAR)
    if raw is None:
        return DEFAULT_PSD_TOL
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValueError(f"{_ENV_VAR} must be a float, got {raw!r}") from exc
    if value <= 0:
        raise ValueError(f"{_ENV_VAR} must be positive, got {value}")
    return value


def resolve_tol(tol: float | None) -> float:
    """Return ``tol`` itself or the (possibly overridden) default."""
    return default_psd_tol() if tol is None else float(tol)
