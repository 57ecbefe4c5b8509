"""Friedman mean-rank analysis across optimizers.

Blocks (rows) are dataset/metric/classifier combinations; treatments
(columns) are optimizers. Within each block the best treatment gets rank 1
and ties receive mid-ranks, so per-block rank sums are preserved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2

from .errors import DegenerateInput, InsufficientBlocks


@dataclass(frozen=True)
class RankTable:
    scores: np.ndarray  # (blocks, treatments)
    ranks: np.ndarray  # per-block mid-ranks, same shape
    mean_ranks: np.ndarray  # (treatments,)
    statistic: float
    p_value: float


def _midranks(row: np.ndarray) -> np.ndarray:
    """Ranks 1..k (1 = smallest value), ties averaged."""
    order = np.argsort(row, kind="stable")
    ranks = np.empty(row.size)
    i = 0
    while i < row.size:
        j = i
        while j + 1 < row.size and row[order[j + 1]] == row[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def friedman(scores, direction: str = "maximize") -> RankTable:
    """Rank treatments per block, then test mean-rank differences.

    ``direction`` says what counts as best: the highest score per block
    (maximize) or the lowest (minimize) gets rank 1. The statistic is the
    Friedman chi-square, 12n/(k(k+1)) * (sum R_j^2 - k(k+1)^2/4) over mean
    ranks R_j, referred to a chi-square with k-1 degrees of freedom.
    """
    if direction not in ("maximize", "minimize"):
        raise ValueError(f"unknown direction {direction!r}")
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 2:
        raise InsufficientBlocks("scores must be a blocks x treatments matrix")
    n, k = scores.shape
    if k < 2:
        raise InsufficientBlocks(f"need at least 2 treatments, got {k}")
    if n < 2:
        if n == 1 and np.all(scores[0] == scores[0, 0]):
            raise DegenerateInput("single all-tied block cannot be ranked")
        raise InsufficientBlocks(f"need at least 2 blocks, got {n}")
    keyed = scores if direction == "minimize" else -scores
    ranks = np.vstack([_midranks(row) for row in keyed])
    mean_ranks = ranks.mean(axis=0)
    statistic = 12.0 * n / (k * (k + 1)) * (
        float(np.sum(mean_ranks**2)) - k * (k + 1) ** 2 / 4.0
    )
    statistic = max(statistic, 0.0)
    return RankTable(
        scores=scores,
        ranks=ranks,
        mean_ranks=mean_ranks,
        statistic=statistic,
        p_value=float(chi2.sf(statistic, k - 1)),
    )
