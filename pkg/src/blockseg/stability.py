"""Stability selection over row/column resamples and final model post-processing.

Each of M resamples keeps half of the rows and half of the columns (sorted, so
the subsample stays block-wise constant in the original order), fits the
homotopy path with s = k_max^2 active variables, and votes for the original
positions reached by the final active set. Scores are thresholded per axis as
a percentage of the axis maximum, contiguous candidates are collapsed to their
best-scoring position, and the selected grid yields the least-squares
block-mean reconstruction.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .lars import ChangePointSet, lars_path
from .linops import validate_matrix


@dataclass(frozen=True)
class SelectionConfig:
    """Resampling parameters; s = k_max^2 variables are kept per fit."""

    k_max: int
    M: int = 100
    threshold_pct: float = 30.0
    seed: int = 0

    def __post_init__(self):
        if self.k_max < 1:
            raise ValueError("k_max must be positive")
        if self.M < 0:
            raise ValueError("M must be nonnegative")
        if not (0.0 < self.threshold_pct <= 100.0):
            raise ValueError("threshold_pct must lie in (0, 100]")

    @property
    def s(self) -> int:
        return self.k_max * self.k_max


@dataclass
class StabilityScores:
    """Per-position vote counts; index t-1 holds the score of position t."""

    row_scores: np.ndarray
    col_scores: np.ndarray
    M: int
    s: int
    seed: int

    @property
    def n(self) -> int:
        return self.row_scores.size


def _fit_final_active(args):
    sub, s = args
    path = lars_path(sub, s=s)
    final = path.final
    return final.active.q.copy(), final.active.r.copy()


def stability_scores(Y, cfg: SelectionConfig, n_jobs: int = 1) -> StabilityScores:
    """Accumulate boundary votes over M half-row/half-column resamples.

    Deterministic given (Y, cfg): each resample draws from its own child of
    the seed sequence, so serial and parallel execution agree.
    """
    Y = validate_matrix(Y)
    n = Y.shape[0]
    n_sub = n // 2
    if n_sub < 2:
        raise ValueError("matrix too small to subsample: need n >= 4")
    if cfg.s > n_sub * n_sub:
        raise ValueError(
            f"k_max^2 = {cfg.s} exceeds the subsample capacity {n_sub * n_sub}"
        )

    row_scores = np.zeros(n, dtype=np.int64)
    col_scores = np.zeros(n, dtype=np.int64)
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.M)

    draws = []
    for child in children:
        rng = np.random.default_rng(child)
        rows = np.sort(rng.choice(n, size=n_sub, replace=False))
        cols = np.sort(rng.choice(n, size=n_sub, replace=False))
        draws.append((rows, cols))

    payloads = ((Y[np.ix_(rows, cols)], cfg.s) for rows, cols in draws)
    if n_jobs == 1 or cfg.M <= 1:
        results = map(_fit_final_active, payloads)
    else:
        workers = min(n_jobs, os.cpu_count() or 1, max(cfg.M, 1))
        pool = ProcessPoolExecutor(max_workers=workers)
        try:
            results = list(pool.map(_fit_final_active, payloads, chunksize=4))
        finally:
            pool.shutdown()

    for (rows, cols), (q_act, r_act) in zip(draws, results):
        # subsample position p >= 2 votes for the original index of the p-th
        # smallest sampled row/column; position 1 is the offset, not a boundary
        for r in r_act:
            if r >= 1:
                row_scores[rows[r]] += 1
        for q in q_act:
            if q >= 1:
                col_scores[cols[q]] += 1

    return StabilityScores(
        row_scores=row_scores,
        col_scores=col_scores,
        M=cfg.M,
        s=cfg.s,
        seed=cfg.seed,
    )


def _select_axis(scores: np.ndarray, threshold_pct: float) -> tuple[int, ...]:
    top = int(scores.max()) if scores.size else 0
    if top == 0:
        return ()
    tau = threshold_pct / 100.0 * top
    candidates = np.flatnonzero(scores >= tau) + 1  # 1-based positions
    if candidates.size == 0:
        return ()
    kept = []
    run = [candidates[0]]
    for pos in candidates[1:]:
        if pos == run[-1] + 1:
            run.append(pos)
        else:
            kept.append(_best_of_run(run, scores))
            run = [pos]
    kept.append(_best_of_run(run, scores))
    return tuple(int(p) for p in kept)


def _best_of_run(run, scores):
    vals = [scores[p - 1] for p in run]
    return run[int(np.argmax(vals))]  # argmax takes the first, i.e. smallest position


def select_changepoints(scores: StabilityScores, threshold_pct: float) -> ChangePointSet:
    """Threshold scores per axis and keep the best position of each contiguous run."""
    if not (0.0 < threshold_pct <= 100.0):
        raise ValueError("threshold_pct must lie in (0, 100]")
    return ChangePointSet(
        rows=_select_axis(scores.row_scores, threshold_pct),
        cols=_select_axis(scores.col_scores, threshold_pct),
    )


def reconstruct_U(Y, cp: ChangePointSet) -> np.ndarray:
    """Least-squares block means of Y on the grid delimited by cp."""
    Y = validate_matrix(Y)
    n = Y.shape[0]
    for t in (*cp.rows, *cp.cols):
        if not (2 <= t <= n):
            raise ValueError(f"boundary {t} outside [2, {n}]")
    row_edges = np.array([0, *[t - 1 for t in cp.rows], n])
    col_edges = np.array([0, *[t - 1 for t in cp.cols], n])
    row_sums = np.add.reduceat(Y, row_edges[:-1], axis=0)
    block_sums = np.add.reduceat(row_sums, col_edges[:-1], axis=1)
    counts = np.outer(np.diff(row_edges), np.diff(col_edges))
    means = block_sums / counts
    return means[
        np.ix_(
            np.repeat(np.arange(len(row_edges) - 1), np.diff(row_edges)),
            np.repeat(np.arange(len(col_edges) - 1), np.diff(col_edges)),
        )
    ]
