"""Slow reference implementations used by the test suite.

Everything here materialises the dense design (guarded to small n) or solves
the penalised least-squares problem by coordinate descent, providing an
independent check on the matrix-free operators, the closed-form Gram, and the
homotopy path solver. Not intended for production-size inputs.
"""

from __future__ import annotations

import numpy as np


MAX_DENSE_N = 32


def materialize_design(n: int) -> np.ndarray:
    """Dense n^2 x n^2 design: the Kronecker square of the all-ones lower triangle."""
    if n > MAX_DENSE_N:
        raise ValueError(f"n={n} exceeds the dense-design guard ({MAX_DENSE_N})")
    if n < 2:
        raise ValueError("n must be >= 2")
    T = np.tril(np.ones((n, n)))
    return np.kron(T, T)


def dense_gram(X: np.ndarray, indices) -> np.ndarray:
    """Gram of the design columns selected by 1-based indices."""
    cols = np.asarray(indices, dtype=np.int64) - 1
    Xa = X[:, cols]
    return Xa.T @ Xa


def chol_from_scratch(G: np.ndarray) -> np.ndarray:
    """Plain lower Cholesky, the from-scratch check for incremental factors."""
    return np.linalg.cholesky(G)


def lasso_oracle(
    X: np.ndarray,
    y: np.ndarray,
    lam: float,
    gap_tol: float = 1e-9,
    max_sweeps: int = 1_000_000,
    beta0: np.ndarray | None = None,
) -> np.ndarray:
    """Coordinate-descent minimiser of ||y - X b||_2^2 + lam * ||b||_1.

    With this parametrisation the stationarity conditions read
    X_j'(y - X b) = (lam / 2) * sign(b_j) on the support, so a homotopy
    breakpoint recorded at correlation level `c` corresponds to lam = 2 c.
    Iterates until the duality gap drops below gap_tol; raises RuntimeError
    if max_sweeps is exhausted first.
    """
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    y = np.asarray(y, dtype=np.float64)
    p = X.shape[1]
    G = X.T @ X
    Xy = X.T @ y
    gdiag = np.diag(G).copy()
    yy = y @ y
    thr = lam / 2.0

    beta = np.zeros(p) if beta0 is None else np.asarray(beta0, dtype=np.float64).copy()
    # residual correlations c = X'(y - X beta), kept up to date per coordinate
    c = Xy - G @ beta

    for sweep in range(max_sweeps):
        delta_max = 0.0
        for j in range(p):
            bj = beta[j]
            rho = c[j] + gdiag[j] * bj  # full correlation with coordinate j free
            if rho > thr:
                bj_new = (rho - thr) / gdiag[j]
            elif rho < -thr:
                bj_new = (rho + thr) / gdiag[j]
            else:
                bj_new = 0.0
            d = bj_new - bj
            if d != 0.0:
                beta[j] = bj_new
                c -= d * G[:, j]
                delta_max = max(delta_max, abs(d))
        # duality gap for 0.5||y-Xb||^2 + thr*||b||_1, doubled to our scale
        if sweep % 4 == 3 or delta_max == 0.0:
            resid = y - X @ beta
            c = X.T @ resid  # also resets incremental drift
            cinf = np.max(np.abs(c))
            if thr == 0.0:
                # degenerate dual; squared stationarity residual as surrogate
                gap = cinf * cinf
            else:
                primal = 0.5 * (resid @ resid) + thr * np.abs(beta).sum()
                scale = min(1.0, thr / cinf) if cinf > 0 else 1.0
                theta = scale * resid
                dual = 0.5 * yy - 0.5 * ((y - theta) @ (y - theta))
                gap = 2.0 * (primal - dual)
            if gap <= gap_tol:
                return beta
            if delta_max == 0.0:
                # floating-point fixed point reached but the requested gap was
                # not; treat as oracle failure rather than silently accept
                raise RuntimeError(
                    f"coordinate descent stalled at gap {gap:.3e} > {gap_tol}"
                )
    raise RuntimeError(f"coordinate descent did not reach gap {gap_tol} "
                       f"within {max_sweeps} sweeps")
