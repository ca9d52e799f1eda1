"""Matrix-free operators for the structured design X = T (x) T.

T is the n x n lower-triangular all-ones matrix, so X acting on vec(V)
is vec(T V T'), i.e. two cascaded cumulative sums over the unvectorised
matrix; the transpose is the pair of suffix (reversed) cumulative sums.
Nothing here ever materialises the n^2 x n^2 design.

Conventions used throughout the package:
  * vec() stacks columns, so flat index j (1-based) maps to matrix cell
    (r+1, q+1) with q, r the quotient/remainder of (j-1) by n.
  * flat vectors are 1-D float64 arrays of length n^2, matrices are
    n x n float64 arrays.
"""

from __future__ import annotations

import math

import numpy as np


def validate_matrix(Y) -> np.ndarray:
    """Return Y as a C-contiguous float64 square matrix, checking invariants."""
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    if Y.ndim != 2 or Y.shape[0] != Y.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {Y.shape}")
    if Y.shape[0] < 2:
        raise ValueError("matrix side length must be >= 2")
    if not np.isfinite(Y).all():
        raise ValueError("matrix contains non-finite entries")
    return Y


def _side_length(v) -> int:
    n = math.isqrt(v.size)
    if n * n != v.size:
        raise ValueError(f"vector length {v.size} is not a perfect square")
    if n < 2:
        raise ValueError("vector must encode a matrix of side >= 2")
    return n


def vec(M) -> np.ndarray:
    """Column-stack a matrix into a flat vector."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return M.flatten(order="F")


def unvec(v, n: int) -> np.ndarray:
    """Inverse of vec: reshape a length-n^2 vector to an n x n matrix."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size != n * n:
        raise ValueError(f"expected a vector of length {n * n}, got {v.shape}")
    return v.reshape((n, n), order="F").copy()


def index_decomposition(j, n: int):
    """Map 1-based variable index j to (q, r) with j - 1 = n*q + r.

    Accepts scalars or arrays; the anchored matrix cell is (r+1, q+1) 1-based.
    """
    j = np.asarray(j)
    if np.any(j < 1) or np.any(j > n * n):
        raise IndexError(f"variable index out of range [1, {n * n}]")
    q, r = np.divmod(j - 1, n)
    return q, r


def cumsum2(V, out=None) -> np.ndarray:
    """T V T': cumulative sums down the columns then across the rows."""
    out = np.cumsum(V, axis=0, out=out)
    np.cumsum(out, axis=1, out=out)
    return out


def suffix_cumsum2(V, out=None) -> np.ndarray:
    """T' V T: suffix sums, entry (i,j) = sum of V over rows >= i, cols >= j."""
    if out is None:
        out = np.empty_like(np.asarray(V, dtype=np.float64))
    np.cumsum(V[::-1, :], axis=0, out=out[::-1, :])
    np.cumsum(out[:, ::-1], axis=1, out=out[:, ::-1])
    return out


def apply_design(v) -> np.ndarray:
    """Compute (T (x) T) v as vec(T V T') in <= 2n^2 additions."""
    v = np.asarray(v, dtype=np.float64)
    n = _side_length(v)
    V = v.reshape((n, n), order="F").copy()
    return cumsum2(V).flatten(order="F")


def apply_design_transpose(v) -> np.ndarray:
    """Compute (T (x) T)' v as vec(T' V T) in <= 2n^2 additions."""
    v = np.asarray(v, dtype=np.float64)
    n = _side_length(v)
    V = v.reshape((n, n), order="F")
    return suffix_cumsum2(V).flatten(order="F")


def apply_design_counted(v):
    """Loop implementation of apply_design that counts scalar additions.

    Test-only: verifies the operation-count bound. Returns (result, n_adds).
    """
    v = np.asarray(v, dtype=np.float64)
    n = _side_length(v)
    V = v.reshape((n, n), order="F").copy()
    adds = 0
    for j in range(n):
        for i in range(1, n):
            V[i, j] += V[i - 1, j]
            adds += 1
    for i in range(n):
        for j in range(1, n):
            V[i, j] += V[i, j - 1]
            adds += 1
    return V.flatten(order="F"), adds


def apply_design_transpose_counted(v):
    """Counting twin of apply_design_transpose; returns (result, n_adds)."""
    v = np.asarray(v, dtype=np.float64)
    n = _side_length(v)
    V = v.reshape((n, n), order="F").copy()
    adds = 0
    for j in range(n):
        for i in range(n - 2, -1, -1):
            V[i, j] += V[i + 1, j]
            adds += 1
    for i in range(n):
        for j in range(n - 2, -1, -1):
            V[i, j] += V[i, j + 1]
            adds += 1
    return V.flatten(order="F"), adds
