"""Small shared helpers: tolerances and array validation."""

from __future__ import annotations

import os

import numpy as np

from .errors import NonSquareError, InvalidParametersError

#: Default structural tolerance, overridable through the PTSYNC_TOL env var.
DEFAULT_TOL = 1e-9


def structural_tol() -> float:
    """Default zero tolerance for structural checks (row sums, kernels).

    Reads PTSYNC_TOL from the environment so batch runs can loosen or
    tighten every structural check at once.
    """
    raw = os.environ.get("PTSYNC_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError as exc:
        raise InvalidParametersError(f"PTSYNC_TOL is not a number: {raw!r}") from exc
    if tol < 0:
        raise InvalidParametersError("PTSYNC_TOL must be nonnegative")
    return tol


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-d float array, copying only when needed."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise InvalidParametersError(f"{name} must be 2-dimensional, got ndim={m.ndim}")
    if m.size == 0:
        raise InvalidParametersError(f"{name} must be non-empty")
    if not np.all(np.isfinite(m)):
        raise InvalidParametersError(f"{name} contains NaN or Inf entries")
    return m


def as_square(a, name: str = "matrix") -> np.ndarray:
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise NonSquareError(f"{name} must be square, got shape {m.shape}")
    return m


def float_repr(x: float) -> str:
    """Shortest round-trip decimal form, used for byte-stable CSV output."""
    return repr(float(x))
