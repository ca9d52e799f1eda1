"""Closed-form Gram submatrices of the structured design and their Cholesky factors.

For variables a, b with Euclidean decompositions (q_a, r_a), (q_b, r_b), the
inner product of the corresponding design columns is the rectangle area

    (n - max(q_a, q_b)) * (n - max(r_a, r_b)),

an exact integer. Any submatrix indexed by distinct variables is symmetric
positive definite, so its Cholesky factor exists and can be maintained under
single-index insertions and deletions in O(K^2) via rank-one update/downdate
of the trailing block.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

from .errors import InternalConsistencyError

PIVOT_FLOOR = 1e-10


class ActiveSet:
    """Sorted set of 1-based variable indices with cached (q, r) decompositions."""

    __slots__ = ("n", "indices", "q", "r")

    def __init__(self, indices, n: int):
        idx = np.asarray(indices, dtype=np.int64)
        if idx.ndim != 1:
            raise ValueError("indices must be one-dimensional")
        if idx.size:
            if np.any(idx < 1) or np.any(idx > n * n):
                raise IndexError(f"variable index out of range [1, {n * n}]")
            if np.any(np.diff(idx) <= 0):
                idx = np.unique(idx)
        self.n = int(n)
        self.indices = idx
        self.q, self.r = np.divmod(idx - 1, n)

    def __len__(self) -> int:
        return self.indices.size

    def __iter__(self):
        return iter(self.indices.tolist())

    def __contains__(self, j) -> bool:
        pos = np.searchsorted(self.indices, j)
        return pos < self.indices.size and self.indices[pos] == j

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ActiveSet)
            and self.n == other.n
            and np.array_equal(self.indices, other.indices)
        )

    def __repr__(self) -> str:
        return f"ActiveSet(n={self.n}, indices={self.indices.tolist()})"


def gram_entry(a: int, b: int, n: int) -> float:
    """Inner product of design columns a and b (1-based), exact in integers."""
    if not (1 <= a <= n * n) or not (1 <= b <= n * n):
        raise IndexError(f"variable index out of range [1, {n * n}]")
    qa, ra = divmod(a - 1, n)
    qb, rb = divmod(b - 1, n)
    return float((n - max(qa, qb)) * (n - max(ra, rb)))


def gram_submatrix(active: ActiveSet) -> np.ndarray:
    """Dense K x K Gram of the active design columns; exact integer values."""
    if len(active) == 0:
        raise ValueError("active set must be non-empty")
    n = active.n
    gq = n - np.maximum.outer(active.q, active.q)
    gr = n - np.maximum.outer(active.r, active.r)
    return (gq * gr).astype(np.float64)


def _gram_column(q, r, qj, rj, n):
    # inner products of column j against the columns decomposed by (q, r)
    return ((n - np.maximum(q, qj)) * (n - np.maximum(r, rj))).astype(np.float64)


def _chol_update(L, x):
    """In-place L <- chol(L L' + x x'); destroys x."""
    m = L.shape[0]
    for k in range(m):
        d = L[k, k]
        r = np.hypot(d, x[k])
        c, s = r / d, x[k] / d
        L[k, k] = r
        if k + 1 < m:
            L[k + 1 :, k] = (L[k + 1 :, k] + s * x[k + 1 :]) / c
            x[k + 1 :] = c * x[k + 1 :] - s * L[k + 1 :, k]


def _chol_downdate(L, x):
    """In-place L <- chol(L L' - x x'); destroys x."""
    m = L.shape[0]
    for k in range(m):
        d = L[k, k]
        rsq = d * d - x[k] * x[k]
        if rsq <= PIVOT_FLOOR * PIVOT_FLOOR:
            raise InternalConsistencyError(
                f"Cholesky downdate pivot collapsed at column {k}: r^2={rsq:.3e}"
            )
        r = np.sqrt(rsq)
        c, s = r / d, x[k] / d
        L[k, k] = r
        if k + 1 < m:
            L[k + 1 :, k] = (L[k + 1 :, k] - s * x[k + 1 :]) / c
            x[k + 1 :] = c * x[k + 1 :] - s * L[k + 1 :, k]


class CholeskyFactor:
    """Cholesky factor of the Gram submatrix of a growing/shrinking active set.

    Indices are kept sorted ascending inside the factor; insertion at an
    interior position re-triangularises the trailing block with a rank-one
    downdate, deletion with a rank-one update. One instance is single-owner
    mutable state and must not be shared across threads.
    """

    def __init__(self, n: int):
        self.n = int(n)
        self._idx = np.empty(0, dtype=np.int64)
        self._q = np.empty(0, dtype=np.int64)
        self._r = np.empty(0, dtype=np.int64)
        self._L = np.zeros((0, 0))

    @property
    def order(self) -> int:
        return self._idx.size

    def __len__(self) -> int:
        return self._idx.size

    @property
    def indices(self) -> np.ndarray:
        return self._idx

    @property
    def q(self) -> np.ndarray:
        return self._q

    @property
    def r(self) -> np.ndarray:
        return self._r

    @property
    def L(self) -> np.ndarray:
        return self._L

    def active_set(self) -> ActiveSet:
        return ActiveSet(self._idx.copy(), self.n)

    def __contains__(self, j) -> bool:
        pos = np.searchsorted(self._idx, j)
        return pos < self._idx.size and self._idx[pos] == j

    def extend(self, j: int) -> None:
        """Insert variable j at its sorted position, O(K^2)."""
        n = self.n
        if not (1 <= j <= n * n):
            raise IndexError(f"variable index out of range [1, {n * n}]")
        if j in self:
            raise ValueError(f"variable {j} already in the active set")
        qj, rj = divmod(j - 1, n)
        p = int(np.searchsorted(self._idx, j))
        k = self.order
        g = _gram_column(self._q, self._r, qj, rj, n)
        gjj = float((n - qj) * (n - rj))

        l21 = np.empty(0)
        if p > 0:
            l21 = solve_triangular(
                self._L[:p, :p], g[:p], lower=True, check_finite=False
            )
        pivot_sq = gjj - l21 @ l21
        if pivot_sq <= PIVOT_FLOOR * PIVOT_FLOOR:
            raise InternalConsistencyError(
                f"Cholesky extension pivot collapsed for variable {j}: "
                f"d^2={pivot_sq:.3e}"
            )
        l22 = np.sqrt(pivot_sq)

        newL = np.zeros((k + 1, k + 1))
        newL[:p, :p] = self._L[:p, :p]
        newL[p, :p] = l21
        newL[p, p] = l22
        if p < k:
            L31 = self._L[p:, :p]
            l32 = (g[p:] - L31 @ l21) / l22
            trail = self._L[p:, p:].copy()
            _chol_downdate(trail, l32.copy())
            newL[p + 1 :, :p] = L31
            newL[p + 1 :, p] = l32
            newL[p + 1 :, p + 1 :] = trail

        self._L = newL
        self._idx = np.insert(self._idx, p, j)
        self._q = np.insert(self._q, p, qj)
        self._r = np.insert(self._r, p, rj)

    def drop(self, j: int) -> None:
        """Remove variable j, re-triangularising the trailing block."""
        pos = np.searchsorted(self._idx, j)
        if pos >= self._idx.size or self._idx[pos] != j:
            raise IndexError(f"variable {j} not in the active set")
        p = int(pos)
        k = self.order
        newL = np.zeros((k - 1, k - 1))
        newL[:p, :p] = self._L[:p, :p]
        if p < k - 1:
            trail = self._L[p + 1 :, p + 1 :].copy()
            _chol_update(trail, self._L[p + 1 :, p].copy())
            newL[p:, :p] = self._L[p + 1 :, :p]
            newL[p:, p:] = trail
        self._L = newL
        self._idx = np.delete(self._idx, p)
        self._q = np.delete(self._q, p)
        self._r = np.delete(self._r, p)

    def solve(self, rhs) -> np.ndarray:
        """Solve gram_submatrix(active) @ x = rhs via the two triangular systems."""
        rhs = np.asarray(rhs, dtype=np.float64)
        if rhs.shape != (self.order,):
            raise ValueError(f"rhs must have length {self.order}, got {rhs.shape}")
        if self.order == 0:
            return np.empty(0)
        y = solve_triangular(self._L, rhs, lower=True, check_finite=False)
        return solve_triangular(
            self._L, y, lower=True, trans="T", check_finite=False
        )
