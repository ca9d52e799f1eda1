"""Homotopy (LARS) solver for the 2D change-point LASSO and path post-processing.

The solver traces the solution path of

    min_B ||vec(Y) - (T (x) T) B||_2^2 + 2*lambda*||B||_1

over decreasing lambda, where lambda is the residual-correlation level
||X'(y - X B)||_inf maintained by the algorithm. Each iteration costs O(n^2)
for the operator applications plus O(K^2) for the factor updates; neither the
design nor its Gram is ever materialised.

Variable indices are 1-based; variable j anchors the matrix cell
(r_j + 1, q_j + 1) with (j - 1) = n*q_j + r_j, so the row boundary it encodes
is r_j + 1 and the column boundary q_j + 1 (position 1 being the global
offset, not a boundary).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InternalConsistencyError
from .gram import ActiveSet, CholeskyFactor
from .linops import cumsum2, suffix_cumsum2, validate_matrix

EQUICORR_RTOL = 1e-9
EQUICORR_ATOL = 1e-12
DENOM_FLOOR = 1e-12
REFRESH_EVERY = 50
PATH_END_RTOL = 1e-9


class Breakpoint(NamedTuple):
    """One homotopy breakpoint: the exact solution at correlation level lam."""

    lam: float
    active: ActiveSet
    coeffs: dict[int, float]


@dataclass
class PathRecord:
    """Full solution path: breakpoints with strictly decreasing lambda."""

    n: int
    s: int
    breakpoints: list[Breakpoint] = field(default_factory=list)

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([bp.lam for bp in self.breakpoints])

    @property
    def final(self) -> Breakpoint:
        return self.breakpoints[-1]


@dataclass(frozen=True)
class ChangePointSet:
    """Sorted 1-based row and column boundaries, both within [2, n]."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        for name, vals in (("rows", self.rows), ("cols", self.cols)):
            arr = tuple(int(v) for v in vals)
            if list(arr) != sorted(set(arr)):
                raise ValueError(f"{name} must be strictly increasing")
            if arr and arr[0] < 2:
                raise ValueError(f"{name} positions must be >= 2")
            object.__setattr__(self, name, arr)

    def to_dict(self) -> dict:
        return {"rows": list(self.rows), "cols": list(self.cols)}

    @classmethod
    def from_dict(cls, d) -> "ChangePointSet":
        return cls(rows=tuple(d["rows"]), cols=tuple(d["cols"]))


def extract_changepoints(active: ActiveSet) -> ChangePointSet:
    """Boundary positions encoded by an active set (position 1 excluded)."""
    rows = np.unique(active.r + 1)
    cols = np.unique(active.q + 1)
    return ChangePointSet(
        rows=tuple(int(t) for t in rows if t != 1),
        cols=tuple(int(t) for t in cols if t != 1),
    )


def fitted_means(Y, point: Breakpoint) -> np.ndarray:
    """Fitted block-constant mean matrix at a path point: unvec(X B)."""
    Y = validate_matrix(Y)
    n = Y.shape[0]
    B = np.zeros((n, n))
    for j, v in point.coeffs.items():
        q, r = divmod(j - 1, n)
        B[r, q] = v
    return cumsum2(B)


def _scatter(buf, r, q, values):
    buf[r, q] = values


def lars_path(Y, s: int, lambda_floor: float | None = None) -> PathRecord:
    """Trace the homotopy path until s variables are active or lambda hits the floor.

    Parameters
    ----------
    Y : (n, n) array
        Observation matrix.
    s : int
        Maximal number of active variables, 1 <= s <= n^2.
    lambda_floor : float, optional
        Stop once lambda falls to this level. Defaults to 1e-10 times the
        initial correlation; pass 0.0 to run the path to its exact end.

    Returns
    -------
    PathRecord
        One breakpoint per iteration; at every breakpoint the recorded
        coefficients solve the criterion at that lambda and satisfy the KKT
        conditions (equal correlation on the active set, no violation off it).
    """
    Y = validate_matrix(Y)
    n = Y.shape[0]
    if not (1 <= s <= n * n):
        raise ValueError(f"s must lie in [1, {n * n}], got {s}")
    if lambda_floor is not None and lambda_floor < 0:
        raise ValueError("lambda_floor must be nonnegative")

    C = suffix_cumsum2(Y)  # residual correlations, cell (r, q) <-> variable nq+r+1
    lam_max = float(np.abs(C).max())
    floor = 1e-10 * lam_max if lambda_floor is None else float(lambda_floor)
    max_iter = max(10 * s, 10)

    factor = CholeskyFactor(n)
    coeffs: dict[int, float] = {}
    cooldown: set[int] = set()

    absC = np.empty_like(C)
    U = np.empty_like(C)
    A = np.empty_like(C)
    Z = np.empty_like(C)
    Zalt = np.empty_like(C)
    D = np.empty_like(C)
    W = np.zeros_like(C)
    prev_r = prev_q = None

    path = PathRecord(n=n, s=s)
    it = 0
    while True:
        np.abs(C, out=absC)
        lam = float(absC.max())

        have_direction = False
        if lam > floor:
            thresh = lam * (1.0 - EQUICORR_RTOL) - EQUICORR_ATOL
            for j in tuple(cooldown):
                q, r = divmod(j - 1, n)
                if absC[r, q] < thresh:
                    cooldown.discard(j)
            absC[factor.r, factor.q] = 0.0  # only scan non-active cells
            hits = np.argwhere(absC >= thresh)
            for r, q in hits:
                j = int(n * q + r + 1)
                if j not in factor and j not in cooldown:
                    factor.extend(j)
                    coeffs[j] = 0.0
            if not len(factor):
                # everything at the bound is on cooldown: re-admit the argmax
                r, q = np.unravel_index(int(np.argmax(absC)), absC.shape)
                j = int(n * q + r + 1)
                cooldown.discard(j)
                factor.extend(j)
                coeffs[j] = 0.0

            # Direction of descent. At exact equicorrelation ties the sweep
            # may admit variables whose direction entry would immediately
            # violate sign coherence; those belong outside the active set on
            # this segment, so peel them off and recompute until consistent.
            for _ in range(len(factor) + 1):
                idx = factor.indices
                ra, qa = factor.r, factor.q
                c_act = C[ra, qa]
                sgn = np.sign(c_act)
                wt = factor.solve(sgn)
                denom = float(wt @ sgn)
                if denom <= 0:
                    raise InternalConsistencyError(
                        f"direction normaliser w'sign = {denom:.3e} is not positive"
                    )
                alpha = 1.0 / np.sqrt(denom)
                w = alpha * wt
                coef_act = np.array([coeffs[j] for j in idx.tolist()])
                bad = (coef_act == 0.0) & (w * sgn < -DENOM_FLOOR)
                if not bad.any():
                    break
                for j in idx[bad].tolist():
                    factor.drop(int(j))
                    del coeffs[int(j)]
                    cooldown.add(int(j))
            else:
                raise InternalConsistencyError(
                    "sign-consistent direction did not stabilise"
                )
            have_direction = True

        path.breakpoints.append(Breakpoint(lam, factor.active_set(), dict(coeffs)))
        if len(factor) >= s or lam <= floor or it >= max_iter:
            break
        it += 1
        if not have_direction:
            raise InternalConsistencyError("no descent direction at a live breakpoint")

        # equiangular vector u = X_A w and its correlations a = X'u
        if prev_r is not None:
            W[prev_r, prev_q] = 0.0
        _scatter(W, ra, qa, w)
        prev_r, prev_q = ra, qa
        cumsum2(W, out=U)
        suffix_cumsum2(U, out=A)

        # entry step: smallest positive crossing among inactive variables
        np.subtract(alpha, A, out=D)
        np.subtract(lam, C, out=Z)
        np.divide(Z, D, out=Z, where=D > DENOM_FLOOR)
        Z[D <= DENOM_FLOOR] = np.inf
        np.add(alpha, A, out=D)
        np.add(lam, C, out=Zalt)
        np.divide(Zalt, D, out=Zalt, where=D > DENOM_FLOOR)
        Zalt[D <= DENOM_FLOOR] = np.inf
        np.minimum(Z, Zalt, out=Z)
        Z[Z <= 0.0] = np.inf
        Z[ra, qa] = np.inf
        for j in cooldown:
            q, r = divmod(j - 1, n)
            Z[r, q] = np.inf
        gamma_in = float(Z.min())

        # exit step: first active coefficient crossing zero
        with np.errstate(divide="ignore", invalid="ignore"):
            out_cand = -coef_act / w
        out_cand[np.abs(w) <= DENOM_FLOOR] = np.inf
        out_cand[out_cand <= 0.0] = np.inf
        gamma_out = float(out_cand.min()) if out_cand.size else np.inf

        gamma_end = lam / alpha  # step at which lambda reaches exactly zero

        if gamma_end <= gamma_in * (1.0 + PATH_END_RTOL) and gamma_end <= gamma_out * (
            1.0 + PATH_END_RTOL
        ):
            # path end: land on the unpenalised solution for this active set
            coef_act = coef_act + gamma_end * w
            for jj, v in zip(idx.tolist(), coef_act):
                coeffs[jj] = float(v)
            path.breakpoints.append(
                Breakpoint(0.0, factor.active_set(), dict(coeffs))
            )
            break

        gamma = min(gamma_in, gamma_out)
        if not np.isfinite(gamma) or gamma <= 0:
            raise InternalConsistencyError(f"invalid step size {gamma!r}")

        np.multiply(A, gamma, out=Zalt)
        np.subtract(C, Zalt, out=C)
        coef_act = coef_act + gamma * w
        for jj, v in zip(idx.tolist(), coef_act):
            coeffs[jj] = float(v)

        if gamma_out < gamma_in:
            crossing = np.flatnonzero(out_cand <= gamma_out * (1.0 + 1e-12))
            for t in crossing.tolist():
                j = int(idx[t])
                factor.drop(j)
                del coeffs[j]
                cooldown.add(j)

        if it % REFRESH_EVERY == 0:
            # periodic full recomputation of the correlations caps drift
            B = np.zeros((n, n))
            for j, v in coeffs.items():
                q, r = divmod(j - 1, n)
                B[r, q] = v
            suffix_cumsum2(Y - cumsum2(B), out=C)

    return path
