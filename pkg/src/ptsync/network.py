"""Multiweighted directed network model and coupling-strength thresholds.

The W-layer network couples N nodes with n-dimensional states through
outer coupling matrices (OCMs, N x N, zero row sums) and symmetric inner
coupling matrices (ICMs, n x n). Regrouping the states by dimension turns
the multiweighted network into n single-weighted ones with sum matrices

    S[d][e] = sum_w ICM_w[d, e] * OCM_w

Each diagonal sum matrix must be the negated Laplacian of a strongly
connected digraph (nonnegative off-diagonals, zero row sums,
irreducible); its positive left null vector supplies the Lyapunov
weights. The stacked, weight-symmetrized matrix then yields the spectral
quantity whose magnitude sets the sufficient coupling strength

    eta > (Hf * C(0) + 1) / |lambda|
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._util import as_matrix, as_square, structural_tol
from .errors import (
    AssumptionViolatedError,
    DimensionMismatchError,
    InvalidParametersError,
    MissingPinningError,
    NotNegativeDefiniteError,
    NotNegativeInTSError,
)
from .linalg import is_strongly_connected, is_zero_row_sum, left_null_vector, symmetric_eigen
from .regulator import Regulator

__all__ = [
    "PinningConfig",
    "MultiWeightNetwork",
    "SumMatrixSet",
    "A1Verdict",
    "ValidationReport",
    "build_sum_matrices",
    "check_assumption_a1",
    "assemble_stacked",
    "fiedler_lambda2",
    "compute_threshold",
]


def _check_symmetric(m: np.ndarray, name: str) -> np.ndarray:
    scale = max(1.0, float(np.max(np.abs(m))))
    if float(np.max(np.abs(m - m.T))) > 1e-12 * scale:
        raise InvalidParametersError(f"{name} must be symmetric within 1e-12")
    return m


@dataclass(frozen=True)
class PinningConfig:
    """Feedback gain and target start for single-node pinning.

    The pinned node is node 1 (index 0) by convention; the target follows
    the free node dynamics from target_initial.
    """

    gain: np.ndarray
    target_initial: np.ndarray

    def __post_init__(self):
        gain = as_square(self.gain, "pinning gain")
        _check_symmetric(gain, "pinning gain")
        target = np.asarray(self.target_initial, dtype=float)
        if target.ndim != 1 or target.shape[0] != gain.shape[0]:
            raise DimensionMismatchError("target_initial must be an n-vector matching gain")
        if not np.all(np.isfinite(target)):
            raise InvalidParametersError("target_initial contains NaN or Inf")
        object.__setattr__(self, "gain", gain)
        object.__setattr__(self, "target_initial", target)


@dataclass(frozen=True)
class MultiWeightNetwork:
    ocms: list          # W matrices, each N x N with zero row sums
    icms: list          # W symmetric matrices, each n x n
    eta: float
    regulator: Regulator
    pinning: PinningConfig | None = None

    def __post_init__(self):
        if len(self.ocms) != len(self.icms):
            raise DimensionMismatchError("need as many ICMs as OCMs")
        if len(self.ocms) < 2:
            raise InvalidParametersError("a multiweighted network needs W > 1 layers")
        ocms = [as_square(m, f"OCM {w + 1}") for w, m in enumerate(self.ocms)]
        icms = [as_square(m, f"ICM {w + 1}") for w, m in enumerate(self.icms)]
        n_nodes = ocms[0].shape[0]
        n_dims = icms[0].shape[0]
        for w, m in enumerate(ocms):
            if m.shape[0] != n_nodes:
                raise DimensionMismatchError("all OCMs must share one node count")
            if not is_zero_row_sum(m):
                raise InvalidParametersError(f"OCM {w + 1} does not have zero row sums")
        for w, m in enumerate(icms):
            if m.shape[0] != n_dims:
                raise DimensionMismatchError("all ICMs must share one state dimension")
            _check_symmetric(m, f"ICM {w + 1}")
        if not (self.eta > 0 and math.isfinite(self.eta)):
            raise InvalidParametersError("eta must be positive and finite")
        if self.pinning is not None and self.pinning.gain.shape[0] != n_dims:
            raise DimensionMismatchError("pinning gain dimension must match the ICMs")
        object.__setattr__(self, "ocms", ocms)
        object.__setattr__(self, "icms", icms)

    @property
    def n_nodes(self) -> int:
        return self.ocms[0].shape[0]

    @property
    def n_dims(self) -> int:
        return self.icms[0].shape[0]

    @property
    def n_layers(self) -> int:
        return len(self.ocms)


@dataclass(frozen=True)
class SumMatrixSet:
    """Per-dimension-pair sum matrices, blocks[d, e] an N x N matrix."""

    blocks: np.ndarray          # shape (n, n, N, N)
    diagonal_only: bool
    pinned: bool

    @property
    def n_dims(self) -> int:
        return self.blocks.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.blocks.shape[2]


@dataclass(frozen=True)
class A1Verdict:
    dimension: int
    ok: bool
    reasons: tuple = ()


@dataclass(frozen=True)
class ValidationReport:
    a1_verdicts: tuple
    nlevecs: tuple              # n vectors of length N
    lambda2: float | None       # synchronization case
    lambda_max: float | None    # pinning case
    threshold: float
    eta: float
    eta_sufficient: bool
    hf: float
    c0: float
    pinned: bool

    def to_dict(self) -> dict:
        return {
            "a1": [
                {"dimension": v.dimension, "ok": v.ok, "reasons": list(v.reasons)}
                for v in self.a1_verdicts
            ],
            "nlevecs": [list(map(float, psi)) for psi in self.nlevecs],
            "lambda2": self.lambda2,
            "lambda_max": self.lambda_max,
            "threshold": self.threshold,
            "eta": self.eta,
            "eta_sufficient": self.eta_sufficient,
            "hf": self.hf,
            "c0": self.c0,
            "pinned": self.pinned,
        }


def build_sum_matrices(net: MultiWeightNetwork, with_pinning: bool = False) -> SumMatrixSet:
    """Combine OCMs and ICMs into per-dimension-pair sum matrices.

    blocks[d, e] = sum_w ICM_w[d, e] * OCM_w; with pinning, the feedback
    gain is subtracted from the (node 1, node 1) entry of each block.
    """
    if with_pinning and net.pinning is None:
        raise MissingPinningError("network has no pinning configuration")
    n, N = net.n_dims, net.n_nodes
    blocks = np.zeros((n, n, N, N))
    for ocm, icm in zip(net.ocms, net.icms):
        blocks += icm[:, :, None, None] * ocm[None, None, :, :]

    off_diag_zero = all(
        np.all(icm[~np.eye(n, dtype=bool)] == 0.0) for icm in net.icms
    )
    if with_pinning:
        gain = net.pinning.gain
        for d in range(n):
            for e in range(n):
                blocks[d, e, 0, 0] -= gain[d, e]
        off_diag_zero = off_diag_zero and np.all(gain[~np.eye(n, dtype=bool)] == 0.0)
    return SumMatrixSet(blocks=blocks, diagonal_only=bool(off_diag_zero), pinned=with_pinning)


def check_assumption_a1(s: SumMatrixSet) -> tuple:
    """Per-dimension verdicts on the diagonal sum matrices.

    Each must have nonnegative off-diagonals, zero row sums, and be
    irreducible. Verdicts carry failure reasons instead of raising.
    """
    if s.pinned:
        raise InvalidParametersError("A1 applies to sum matrices built without pinning")
    tol = structural_tol()
    verdicts = []
    for d in range(s.n_dims):
        m = s.blocks[d, d]
        scale = max(1.0, float(np.max(np.abs(m))))
        reasons = []
        off = m[~np.eye(s.n_nodes, dtype=bool)]
        if off.size and float(off.min()) < -tol * scale:
            reasons.append("NegativeOffDiagonal")
        if not is_zero_row_sum(m, tol * scale):
            reasons.append("NonzeroRowSum")
        if not is_strongly_connected(m):
            reasons.append("NotStronglyConnected")
        verdicts.append(A1Verdict(dimension=d, ok=not reasons, reasons=tuple(reasons)))
    return tuple(verdicts)


def nlevecs(s: SumMatrixSet) -> tuple:
    """Positive, sum-one left null vectors of the diagonal sum matrices."""
    if s.pinned:
        raise InvalidParametersError("null vectors come from the un-pinned diagonal blocks")
    return tuple(left_null_vector(s.blocks[d, d]) for d in range(s.n_dims))


def assemble_stacked(s: SumMatrixSet, psis, pinned: bool) -> np.ndarray:
    """Weight-symmetrized stacked matrix of all blocks (size nN x nN).

    The block-diagonal weight is diag(psi_d) - psi_d psi_d^T per dimension
    when pinned is False (its kernel is the per-block all-ones direction)
    and plain diag(psi_d) when pinned is True. The result is symmetric by
    construction.
    """
    n, N = s.n_dims, s.n_nodes
    if len(psis) != n or any(np.asarray(p).shape != (N,) for p in psis):
        raise DimensionMismatchError("need one length-N weight vector per dimension")
    m_full = np.block([[s.blocks[d, e] for e in range(n)] for d in range(n)])
    weight = np.zeros((n * N, n * N))
    for d, psi in enumerate(psis):
        psi = np.asarray(psi, dtype=float)
        w = np.diag(psi) if pinned else np.diag(psi) - np.outer(psi, psi)
        weight[d * N:(d + 1) * N, d * N:(d + 1) * N] = w
    prod = weight @ m_full
    return (prod + prod.T) / 2.0


def _transverse_basis(N: int, n: int) -> np.ndarray:
    """Orthonormal basis of the per-block complement of the ones vector."""
    col = np.ones((N, 1))
    q_full, _ = np.linalg.qr(np.hstack([col, np.eye(N)[:, : N - 1]]))
    q_block = q_full[:, 1:N]
    basis = np.zeros((n * N, n * (N - 1)))
    for d in range(n):
        basis[d * N:(d + 1) * N, d * (N - 1):(d + 1) * (N - 1)] = q_block
    return basis


def fiedler_lambda2(m_bar: np.ndarray, n_nodes: int, n_blocks: int) -> float:
    """Largest eigenvalue of the stacked matrix restricted to the
    transverse space (per-block vectors orthogonal to all-ones).

    Raises NotNegativeInTSError when that eigenvalue is not strictly
    negative (tolerance 1e-9 * ||.||_F), or when there is no transverse
    space at all (single-node blocks).
    """
    m_bar = as_square(m_bar, "stacked matrix")
    if m_bar.shape[0] != n_nodes * n_blocks:
        raise DimensionMismatchError("stacked matrix size must be n_nodes * n_blocks")
    if n_nodes < 2:
        raise NotNegativeInTSError("no transverse space for single-node blocks")
    basis = _transverse_basis(n_nodes, n_blocks)
    reduced = basis.T @ m_bar @ basis
    reduced = (reduced + reduced.T) / 2.0
    lam = symmetric_eigen(reduced).lambda_max
    fro = max(1.0, float(np.linalg.norm(m_bar, "fro")))
    if lam >= -structural_tol() * fro:
        raise NotNegativeInTSError(
            f"largest transverse eigenvalue {lam:.3e} is not negative"
        )
    return lam


def compute_threshold(net: MultiWeightNetwork, hf: float) -> ValidationReport:
    """Sufficient coupling strength for prescribed-time synchronization.

    threshold = (hf * C(0) + 1) / |lambda|, where lambda is the largest
    transverse eigenvalue of the weighted stacked matrix (synchronization)
    or the largest eigenvalue of the pinned weighted stacked matrix
    (pinning control). Raises AssumptionViolatedError when a diagonal sum
    matrix fails the structural assumption.
    """
    if not (hf > 0 and math.isfinite(hf)):
        raise InvalidParametersError("hf must be positive and finite")
    plain = build_sum_matrices(net, with_pinning=False)
    verdicts = check_assumption_a1(plain)
    if not all(v.ok for v in verdicts):
        bad = [f"dimension {v.dimension}: {', '.join(v.reasons)}" for v in verdicts if not v.ok]
        raise AssumptionViolatedError("; ".join(bad), verdicts=verdicts)
    psis = nlevecs(plain)

    lambda2 = lambda_max = None
    if net.pinning is not None:
        pinned_set = build_sum_matrices(net, with_pinning=True)
        m_tilde = assemble_stacked(pinned_set, psis, pinned=True)
        lam = symmetric_eigen(m_tilde).lambda_max
        fro = max(1.0, float(np.linalg.norm(m_tilde, "fro")))
        if lam >= -structural_tol() * fro:
            raise NotNegativeDefiniteError(
                f"pinned stacked matrix has largest eigenvalue {lam:.3e}"
            )
        lambda_max = lam
    else:
        m_bar = assemble_stacked(plain, psis, pinned=False)
        lambda2 = fiedler_lambda2(m_bar, net.n_nodes, net.n_dims)
        lam = lambda2

    c0 = net.regulator.c0
    threshold = (hf * c0 + 1.0) / abs(lam)
    return ValidationReport(
        a1_verdicts=verdicts,
        nlevecs=psis,
        lambda2=lambda2,
        lambda_max=lambda_max,
        threshold=threshold,
        eta=net.eta,
        eta_sufficient=bool(net.eta > threshold),
        hf=float(hf),
        c0=float(c0),
        pinned=net.pinning is not None,
    )
