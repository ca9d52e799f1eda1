"""Synthetic block-wise constant matrices with Gaussian noise.

Four built-in 5x5 block-mean patterns (checkerboard, block diagonal, and two
harder mixed layouts) plus a generic alternating checkerboard with an
arbitrary number of equally spaced boundaries. All generation is
deterministic given the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lars import ChangePointSet
from .linops import validate_matrix

SCENARIO_MEANS = {
    1: np.array(
        [
            [1, 0, 1, 0, 1],
            [0, 1, 0, 1, 0],
            [1, 0, 1, 0, 1],
            [0, 1, 0, 1, 0],
            [1, 0, 1, 0, 1],
        ],
        dtype=float,
    ),
    2: np.eye(5),
    3: np.array(
        [
            [1, 0, 0, 0, 0],
            [0, 1, 1, 1, 1],
            [0, 1, 1, 0, 0],
            [0, 1, 0, 1, 0],
            [0, 1, 0, 0, 1],
        ],
        dtype=float,
    ),
    4: np.array(
        [
            [0, -1, -1, -1, -1],
            [-1, -1, 0, -1, 0],
            [-1, 0, 1, 0, 1],
            [-1, -1, 0, -1, 0],
            [-1, 0, 1, 0, 1],
        ],
        dtype=float,
    ),
}


def equal_boundaries(n: int, n_boundaries: int) -> tuple[int, ...]:
    """Equally spaced boundary positions: floor(k*n/(K+1)) + 1, k = 1..K."""
    k1 = n_boundaries + 1
    return tuple(k * n // k1 + 1 for k in range(1, n_boundaries + 1))


@dataclass(frozen=True)
class Scenario:
    """One of the four built-in block-mean layouts at a given size and noise level."""

    id: int
    n: int
    sigma: float = 0.0
    seed: int = 0
    boundaries: tuple[int, ...] | None = None

    def resolved_boundaries(self) -> tuple[int, ...]:
        if self.boundaries is not None:
            return tuple(int(t) for t in self.boundaries)
        return equal_boundaries(self.n, 4)


@dataclass(frozen=True)
class GeneratedDataset:
    Y: np.ndarray
    U: np.ndarray
    truth: ChangePointSet


def _block_matrix(mu: np.ndarray, n: int, boundaries) -> np.ndarray:
    bnds = np.asarray(boundaries, dtype=np.int64)
    if bnds.size and (np.any(np.diff(bnds) <= 0) or bnds[0] < 2 or bnds[-1] > n):
        raise ValueError(f"boundaries must be strictly increasing in [2, {n}]")
    if bnds.size != mu.shape[0] - 1:
        raise ValueError(
            f"{mu.shape[0] - 1} boundaries required for a {mu.shape[0]}-block layout"
        )
    positions = np.arange(1, n + 1)
    block = np.searchsorted(bnds, positions, side="right")
    return mu[np.ix_(block, block)]


def generate(sc: Scenario) -> GeneratedDataset:
    """Draw Y = U + sigma * Z for the scenario's block-mean layout."""
    if sc.id not in SCENARIO_MEANS:
        raise ValueError(f"unknown scenario id {sc.id}; valid ids are 1..4")
    if sc.n < 10:
        raise ValueError("n must be >= 10 so every block is non-empty")
    if sc.sigma < 0:
        raise ValueError("sigma must be nonnegative")
    bnds = sc.resolved_boundaries()
    U = _block_matrix(SCENARIO_MEANS[sc.id], sc.n, bnds)
    rng = np.random.default_rng(sc.seed)
    Y = U + sc.sigma * rng.standard_normal((sc.n, sc.n))
    truth = ChangePointSet(rows=bnds, cols=bnds)
    return GeneratedDataset(Y=validate_matrix(Y), U=U, truth=truth)


def generate_checkerboard_k(
    n: int, n_boundaries: int, sigma: float = 0.0, seed: int = 0
) -> GeneratedDataset:
    """Alternating 0/1 checkerboard with K equally spaced boundaries per axis."""
    if n_boundaries < 0:
        raise ValueError("number of boundaries must be nonnegative")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    bnds = equal_boundaries(n, n_boundaries)
    if n_boundaries > 0:
        gaps = np.diff(np.concatenate(([1], bnds, [n + 1])))
        if np.any(gaps < 2):
            raise ValueError(
                f"{n_boundaries} boundaries do not fit in n={n} with segments >= 2"
            )
    positions = np.arange(1, n + 1)
    block = np.searchsorted(np.asarray(bnds), positions, side="right")
    U = ((block[:, None] + block[None, :]) % 2).astype(float)
    rng = np.random.default_rng(seed)
    Y = U + sigma * rng.standard_normal((n, n))
    truth = ChangePointSet(rows=bnds, cols=bnds)
    return GeneratedDataset(Y=validate_matrix(Y), U=U, truth=truth)
