"""Recovery metrics: ROC/AUC along the regularisation path and Hausdorff parts.

A detected boundary counts as a true positive when it lies within match_tol
positions of a true one; an estimated boundary with no true boundary within
match_tol is a false positive. The curve sweeps the path breakpoints from the
largest lambda down, is completed with the (0,0) and (1,1) endpoints, and the
area is the trapezoidal integral of its upper staircase.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .lars import ChangePointSet, PathRecord, extract_changepoints


@dataclass(frozen=True)
class RocCurve:
    points: np.ndarray  # (m, 2) of (false positive rate, true positive rate)
    auc: float


class HausdorffParts(NamedTuple):
    d1: float
    d2: float
    d: float


def _rates(est, truth, match_tol, n):
    k_star = len(truth)
    neg = n - 1 - k_star
    if not est:
        return 0.0, 0.0
    e = np.asarray(est)[:, None]
    t = np.asarray(truth)[None, :]
    close = np.abs(e - t) <= match_tol
    tpr = close.any(axis=0).sum() / k_star
    fpr = (~close.any(axis=1)).sum() / neg if neg > 0 else 0.0
    return float(fpr), float(tpr)


def roc_from_path(
    path: PathRecord,
    truth: ChangePointSet,
    axis: str = "rows",
    match_tol: int = 2,
) -> RocCurve:
    """ROC of boundary recovery along the path, sweeping breakpoints by lambda."""
    if axis not in ("rows", "cols"):
        raise ValueError("axis must be 'rows' or 'cols'")
    true_pos = truth.rows if axis == "rows" else truth.cols
    if not true_pos:
        raise ValueError("truth must contain at least one boundary")
    if n_negatives(path.n, len(true_pos)) <= 0:
        raise ValueError("no negative positions: every position is a true boundary")

    pts = [(0.0, 0.0), (1.0, 1.0)]
    for bp in path.breakpoints:
        cps = extract_changepoints(bp.active)
        est = cps.rows if axis == "rows" else cps.cols
        pts.append(_rates(est, true_pos, match_tol, path.n))
    pts = np.array(sorted(set(pts)))
    # upper staircase: monotone TPR against FPR
    pts[:, 1] = np.maximum.accumulate(pts[:, 1])
    auc = float(np.trapezoid(pts[:, 1], pts[:, 0]))
    return RocCurve(points=pts, auc=auc)


def n_negatives(n: int, k_star: int) -> int:
    return n - 1 - k_star


def hausdorff_parts(a, b) -> HausdorffParts:
    """Directed max-min distances between two non-empty sorted integer sets.

    d1 is the largest distance from an element of b to the set a, d2 the
    converse, and d their maximum.
    """
    a = np.asarray(sorted(a), dtype=np.int64)
    b = np.asarray(sorted(b), dtype=np.int64)
    if a.size == 0 or b.size == 0:
        raise ValueError("both boundary sets must be non-empty")
    return HausdorffParts(
        d1=_directed(a, b), d2=_directed(b, a), d=max(_directed(a, b), _directed(b, a))
    )


def _directed(a: np.ndarray, targets: np.ndarray) -> float:
    """max over t in targets of the distance to the nearest element of a."""
    pos = np.searchsorted(a, targets)
    left = np.abs(targets - a[np.clip(pos - 1, 0, a.size - 1)])
    right = np.abs(targets - a[np.clip(pos, 0, a.size - 1)])
    return float(np.max(np.minimum(left, right)))
