"""Node dynamics: piecewise-linear affine systems and the built-in
three-dimensional Chua-type benchmark.

Every supported f has the form f(x) = D x + A h(x) with h the
component-wise saturation h(u) = (|u + 1| - |u - 1|) / 2, which is odd
and 1-Lipschitz. The one-sided growth bound

    (x - y)^T (f(x) - f(y)) <= Hf ||x - y||^2

then holds with Hf = lambda_max((D + D^T)/2) + sigma_max(A); for the
Chua benchmark (D = -I) this gives Hf = 5.4704.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._util import as_square
from .errors import DimensionMismatchError, InvalidParametersError
from .linalg import symmetric_eigen

__all__ = ["NodeDynamics", "QuadCheck", "saturation", "verify_quad"]

CHUA_A = np.array(
    [
        [-1.25, -3.2, -3.2],
        [-3.2, 1.1, -4.4],
        [-3.2, 4.4, 1.0],
    ]
)
CHUA_HF = 5.4704


def saturation(u):
    """Odd, 1-Lipschitz saturation used by the piecewise-linear dynamics."""
    u = np.asarray(u, dtype=float)
    return (np.abs(u + 1.0) - np.abs(u - 1.0)) / 2.0


@dataclass(frozen=True)
class NodeDynamics:
    """f(x) = D x + A h(x) with a declared one-sided growth constant hf."""

    kind: str
    D: np.ndarray
    A: np.ndarray
    hf: float

    def __post_init__(self):
        if self.kind not in ("chua3", "pwl_affine"):
            raise InvalidParametersError(f"unknown dynamics kind {self.kind!r}")
        d = as_square(self.D, "D")
        a = as_square(self.A, "A")
        if d.shape != a.shape:
            raise DimensionMismatchError("D and A must have equal shapes")
        if not (self.hf > 0 and math.isfinite(self.hf)):
            raise InvalidParametersError("hf must be positive and finite")
        object.__setattr__(self, "D", d)
        object.__setattr__(self, "A", a)

    @classmethod
    def chua3(cls) -> "NodeDynamics":
        """Built-in three-dimensional Chua-type benchmark dynamics."""
        return cls(kind="chua3", D=-np.eye(3), A=CHUA_A.copy(), hf=CHUA_HF)

    @classmethod
    def pwl_affine(cls, D, A, hf: float) -> "NodeDynamics":
        return cls(kind="pwl_affine", D=np.asarray(D, float), A=np.asarray(A, float), hf=hf)

    @property
    def n_dims(self) -> int:
        return self.D.shape[0]

    def f(self, x: np.ndarray) -> np.ndarray:
        """Evaluate f row-wise: x may be a single state or an (N, n) stack."""
        x = np.asarray(x, dtype=float)
        return x @ self.D.T + saturation(x) @ self.A.T

    def analytic_hf(self) -> float:
        """One-sided growth bound lambda_max(sym(D)) + sigma_max(A).

        sigma_max comes from the symmetric eigendecomposition of A^T A,
        so the bound is computable with the symmetric solver alone.
        """
        sym_d = symmetric_eigen((self.D + self.D.T) / 2.0).lambda_max
        sigma_sq = symmetric_eigen(self.A.T @ self.A).lambda_max
        return float(sym_d + math.sqrt(max(sigma_sq, 0.0)))


@dataclass(frozen=True)
class QuadCheck:
    """Result of sampling the one-sided growth ratio."""

    max_ratio: float
    declared_hf: float
    passed: bool


def verify_quad(
    dyn: NodeDynamics, trials: int, radius: float, rng_seed: int
) -> QuadCheck:
    """Sample pairs (x, y) in the radius ball and maximize
    (x - y)^T (f(x) - f(y)) / ||x - y||^2 against the declared hf.

    Passes when the sampled maximum stays below hf + 1e-6.
    """
    if trials < 1:
        raise InvalidParametersError("trials must be >= 1")
    rng = np.random.default_rng(rng_seed)
    n = dyn.n_dims

    def ball(count):
        v = rng.standard_normal((count, n))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        r = radius * rng.random(count) ** (1.0 / n)
        return v * r[:, None]

    max_ratio = -np.inf
    chunk = 20000
    remaining = trials
    while remaining > 0:
        count = min(chunk, remaining)
        remaining -= count
        x = ball(count)
        y = ball(count)
        diff = x - y
        norms = np.einsum("ij,ij->i", diff, diff)
        keep = norms > 1e-20
        if not np.any(keep):
            continue
        fdiff = dyn.f(x) - dyn.f(y)
        ratios = np.einsum("ij,ij->i", diff[keep], fdiff[keep]) / norms[keep]
        max_ratio = max(max_ratio, float(ratios.max()))

    return QuadCheck(
        max_ratio=max_ratio,
        declared_hf=dyn.hf,
        passed=bool(max_ratio <= dyn.hf + 1e-6),
    )
