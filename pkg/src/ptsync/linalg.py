"""Dense linear algebra for small real matrices.

Everything here targets matrices of dimension up to a few hundred:
symmetric eigendecomposition by cyclic Jacobi rotations, the positive
left null vector of a zero-row-sum matrix, and structural digraph checks
(zero row sums, irreducibility via strongly connected components).

All functions are pure; none mutate their arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._util import as_square, structural_tol
from .errors import (
    DegenerateKernelError,
    NonPositiveEntryError,
    NotSymmetricError,
)

__all__ = [
    "SpectrumResult",
    "symmetric_eigen",
    "left_null_vector",
    "is_zero_row_sum",
    "is_strongly_connected",
]

# Off-diagonal Frobenius target for the Jacobi sweep, relative to ||A||_F.
_JACOBI_TOL = 1e-12
_MAX_SWEEPS = 60


@dataclass(frozen=True)
class SpectrumResult:
    """Full real spectrum of a symmetric matrix.

    eigenvalues are sorted descending; eigenvectors[:, k] is the unit
    eigenvector paired with eigenvalues[k].
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[-1])


def _offdiag_norm(a: np.ndarray) -> float:
    return float(np.sqrt(max(np.sum(a**2) - np.sum(np.diag(a) ** 2), 0.0)))


def symmetric_eigen(a) -> SpectrumResult:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm falls below
    1e-12 * ||A||_F. Raises NotSymmetricError when the asymmetry of the
    input exceeds 1e-12 * max(1, ||A||_inf).
    """
    a = as_square(a, "A")
    scale = max(1.0, float(np.max(np.abs(a))))
    if float(np.max(np.abs(a - a.T))) > 1e-12 * scale:
        raise NotSymmetricError("matrix asymmetry exceeds 1e-12 * max(1, ||A||_inf)")

    m = a.shape[0]
    w = (a + a.T) / 2.0
    v = np.eye(m)
    fro = float(np.linalg.norm(w, "fro"))
    if fro == 0.0:
        vals = np.zeros(m)
        return SpectrumResult(vals, v)

    for _ in range(_MAX_SWEEPS):
        if _offdiag_norm(w) <= _JACOBI_TOL * fro:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = w[p, q]
                if abs(apq) <= 1e-30 * fro:
                    continue
                theta = (w[q, q] - w[p, p]) / (2.0 * apq)
                t = np.sign(theta) if theta != 0 else 1.0
                t = t / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * w[:, p] - s * w[:, q]
                rot_q = s * w[:, p] + c * w[:, q]
                w[:, p], w[:, q] = rot_p, rot_q
                rot_p = c * w[p, :] - s * w[q, :]
                rot_q = s * w[p, :] + c * w[q, :]
                w[p, :], w[q, :] = rot_p, rot_q
                # Re-symmetrize the rotated pair to stop drift.
                w[p, q] = w[q, p] = (w[p, q] + w[q, p]) / 2.0
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q

    vals = np.diag(w).copy()
    order = np.argsort(-vals, kind="stable")
    return SpectrumResult(vals[order], v[:, order])


def left_null_vector(m, tol: float | None = None) -> np.ndarray:
    """Positive left null vector psi of a zero-row-sum matrix, sum(psi) = 1.

    psi satisfies psi^T M = 0. The kernel of M^T must be one-dimensional
    (raises DegenerateKernelError otherwise); a kernel component that is
    not strictly positive raises NonPositiveEntryError, which signals
    that M is not the negated Laplacian of a strongly connected digraph.
    """
    m = as_square(m, "M")
    scale = max(1.0, float(np.max(np.abs(m))))
    if tol is None:
        tol = structural_tol()
    row_sums = np.abs(m.sum(axis=1))
    if float(row_sums.max()) > tol * scale:
        raise DegenerateKernelError(
            f"row sums not zero within tolerance (max |sum| = {row_sums.max():.3e})"
        )

    # Kernel of M^T from its SVD; singular values below tol*scale count
    # as numerically zero.
    u, s, vt = np.linalg.svd(m.T)
    kernel_dim = int(np.sum(s <= tol * scale)) if m.shape[0] > 1 else 1
    if m.shape[0] == 1:
        return np.ones(1)
    if kernel_dim != 1:
        raise DegenerateKernelError(f"numerical kernel dimension is {kernel_dim}, expected 1")

    psi = vt[-1]
    total = psi.sum()
    if total < 0:
        psi = -psi
        total = -total
    if np.any(psi <= 0.0):
        raise NonPositiveEntryError("kernel vector has a non-positive component")
    return psi / total


def is_zero_row_sum(m, tol: float | None = None) -> bool:
    """True iff every row of the square matrix sums to zero within tol."""
    m = as_square(m, "M")
    if tol is None:
        tol = structural_tol() * max(1.0, float(np.max(np.abs(m))))
    return bool(np.all(np.abs(m.sum(axis=1)) <= tol))


def is_strongly_connected(m) -> bool:
    """True iff the digraph with an arc i->j whenever i != j and M[i, j] != 0
    has a single strongly connected component covering every node.

    Irreducibility of the matrix is exactly this property. Uses Tarjan's
    algorithm (iterative) so large-ish matrices do not hit the recursion
    limit.
    """
    m = as_square(m, "M")
    n = m.shape[0]
    if n == 1:
        return True

    adj = [np.nonzero(m[i])[0] for i in range(n)]
    adj = [[int(j) for j in row if j != i] for i, row in enumerate(adj)]

    index = [-1] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    scc_count = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            node, child_idx = work.pop()
            if child_idx == 0:
                index[node] = lowlink[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            advanced = False
            for k in range(child_idx, len(adj[node])):
                succ = adj[node][k]
                if index[succ] == -1:
                    work.append((node, k + 1))
                    work.append((succ, 0))
                    advanced = True
                    break
                if on_stack[succ]:
                    lowlink[node] = min(lowlink[node], index[succ])
            if advanced:
                continue
            if lowlink[node] == index[node]:
                scc_count += 1
                if scc_count > 1:
                    return False
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    if w == node:
                        break
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])

    return scc_count == 1 and counter == n
