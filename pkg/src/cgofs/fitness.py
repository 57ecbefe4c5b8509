"""Binary feature-selection objective.

A continuous position is thresholded into a mask; the masked training data
is scored with an inner classifier on a train-only evaluation split; fitness
is ``weight * error + (1 - weight) * selected/dim`` (minimized). The test
split is never touched during optimization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classifiers import ClassifierSpec, predict, train
from .core import BinaryMask, FeatureDataset
from .errors import DimMismatch

DEFAULT_THRESHOLD = 0.5


def binarize(position: np.ndarray, threshold: float = DEFAULT_THRESHOLD) -> BinaryMask:
    """Bit j is 1 iff position[j] > threshold (strictly)."""
    position = np.asarray(position)
    return BinaryMask((position > threshold).astype(np.uint8))


@dataclass(frozen=True)
class FitnessConfig:
    """Objective weights and inner-evaluation protocol.

    ``error_weight`` trades classification error against the selected-subset
    ratio; at the 0.99 default the error term dominates. The inner split is
    drawn once per run so the objective is deterministic within a run.
    """

    error_weight: float = 0.99
    threshold: float = DEFAULT_THRESHOLD
    classifier: ClassifierSpec = field(default_factory=ClassifierSpec)
    inner_eval: str = "holdout"  # {holdout, kfold}
    holdout_fraction: float = 0.2
    folds: int = 5
    fold_repeats: int = 1  # independent k-fold partitions averaged together
    empty_mask_penalty: float | None = None  # defaults to 1 + error_weight

    def __post_init__(self):
        if not 0.0 <= self.error_weight <= 1.0:
            raise ValueError("error_weight must be in [0, 1]")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("threshold must be in (0, 1)")
        if self.inner_eval not in ("holdout", "kfold"):
            raise ValueError(f"unknown inner_eval {self.inner_eval!r}")
        if self.folds < 2 or self.fold_repeats < 1:
            raise ValueError("need folds >= 2 and fold_repeats >= 1")

    @property
    def penalty(self) -> float:
        if self.empty_mask_penalty is not None:
            return self.empty_mask_penalty
        return 1.0 + self.error_weight


def stratified_holdout(
    y: np.ndarray, fraction: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Per-class shuffled split; every class keeps at least one row per side."""
    fit_idx: list[np.ndarray] = []
    val_idx: list[np.ndarray] = []
    for c in np.unique(y):
        rows = np.flatnonzero(y == c)
        rows = rows[rng.permutation(rows.size)]
        n_val = int(round(rows.size * fraction))
        n_val = min(max(n_val, 1), rows.size - 1)
        val_idx.append(rows[:n_val])
        fit_idx.append(rows[n_val:])
    return np.sort(np.concatenate(fit_idx)), np.sort(np.concatenate(val_idx))


def stratified_folds(
    y: np.ndarray, folds: int, rng: np.random.Generator
) -> np.ndarray:
    """Fold id per row, classes spread round-robin after a per-class shuffle."""
    assignment = np.empty(y.shape[0], dtype=np.int64)
    for c in np.unique(y):
        rows = np.flatnonzero(y == c)
        rows = rows[rng.permutation(rows.size)]
        assignment[rows] = np.arange(rows.size) % folds
    return assignment


class WrapperObjective:
    """Run-scoped callable position -> fitness, cached per mask.

    Built from the train split only; the constructor draws the inner split
    and a classifier seed exactly once from ``rng``, so two positions that
    binarize to the same mask always get the identical fitness value and the
    result does not depend on evaluation order.
    """

    def __init__(
        self,
        train_x: np.ndarray,
        train_y: np.ndarray,
        config: FitnessConfig,
        rng: np.random.Generator,
    ):
        self.x = np.asarray(train_x, dtype=np.float64)
        self.y = np.asarray(train_y, dtype=np.int64)
        self.config = config
        self.dim = self.x.shape[1]
        if config.inner_eval == "holdout":
            self.fit_idx, self.val_idx = stratified_holdout(
                self.y, config.holdout_fraction, rng
            )
            self.fold_assignments = None
        else:
            self.fold_assignments = [
                stratified_folds(self.y, config.folds, rng)
                for _ in range(config.fold_repeats)
            ]
            self.fit_idx = self.val_idx = None
        self.classifier_seed = int(rng.integers(0, 2**32))
        self._cache: dict[bytes, float] = {}

    @classmethod
    def from_dataset(
        cls, dataset: FeatureDataset, config: FitnessConfig, rng: np.random.Generator
    ) -> "WrapperObjective":
        return cls(dataset.train_x, dataset.train_y, config, rng)

    def __call__(self, position: np.ndarray) -> float:
        if np.asarray(position).shape[0] != self.dim:
            raise DimMismatch("position dim differs from dataset dim")
        return self.fitness_for_mask(binarize(position, self.config.threshold))

    def fitness_for_mask(self, mask: BinaryMask) -> float:
        if mask.dim != self.dim:
            raise DimMismatch("mask dim differs from dataset dim")
        if mask.selected_count == 0:
            return self.config.penalty
        key = mask.key()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        error = self._inner_error(mask.indices)
        w = self.config.error_weight
        value = w * error + (1.0 - w) * (mask.selected_count / self.dim)
        self._cache[key] = value
        return value

    def _inner_error(self, cols: np.ndarray) -> float:
        x = self.x[:, cols]
        if self.fold_assignments is None:
            return self._split_error(x, self.fit_idx, self.val_idx)
        errors = [
            self._split_error(
                x, np.flatnonzero(fold_of != f), np.flatnonzero(fold_of == f)
            )
            for fold_of in self.fold_assignments
            for f in range(self.config.folds)
        ]
        return float(np.mean(errors))

    def _split_error(self, x, fit_idx, val_idx) -> float:
        # Fresh identically seeded generator per call: cache-order independent.
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self.classifier_seed))
        )
        model = train(self.config.classifier, x[fit_idx], self.y[fit_idx], rng)
        predicted = predict(model, x[val_idx])
        return float(np.mean(predicted != self.y[val_idx]))


def evaluate(
    position: np.ndarray,
    dataset: FeatureDataset,
    config: FitnessConfig,
    rng: np.random.Generator,
) -> float:
    """One-shot form of the objective; draws the inner split from ``rng``.

    Run-scoped code should construct one :class:`WrapperObjective` instead so
    every evaluation shares the same split.
    """
    return WrapperObjective.from_dataset(dataset, config, rng)(position)
