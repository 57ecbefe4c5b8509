"""Confusion-matrix construction and the evaluation-metric suite.

Multiclass scores are unweighted macro averages over one-vs-rest class
metrics; accuracy is global (trace over total). Any 0/0 metric ratio is
defined as 0 so reports stay total and comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LabelOutOfRange, LengthMismatch


@dataclass(frozen=True)
class ConfusionMatrix:
    """Rows index the true class, columns the predicted class."""

    counts: np.ndarray

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise ValueError("confusion matrix must be square")
        if (counts < 0).any():
            raise ValueError("confusion counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def class_count(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class ClassMetrics:
    label: int
    tp: int
    tn: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    sensitivity: float
    specificity: float
    balanced_accuracy: float


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    sensitivity: float
    specificity: float
    balanced_accuracy: float
    per_class: tuple[ClassMetrics, ...]
    wall_time: float = 0.0


def confusion(y_true, y_pred, class_count: int) -> ConfusionMatrix:
    """counts[i, j] = number of samples with true class i predicted as j."""
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise LengthMismatch("label vectors must be 1-D and equally long")
    if y_true.size < 1:
        raise LengthMismatch("need at least one sample")
    for name, y in (("true", y_true), ("pred", y_pred)):
        if y.min() < 0 or y.max() >= class_count:
            raise LabelOutOfRange(f"{name} labels outside [0, {class_count})")
    counts = np.zeros((class_count, class_count), dtype=np.int64)
    np.add.at(counts, (y_true, y_pred), 1)
    return ConfusionMatrix(counts)


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def compute_report(cm: ConfusionMatrix) -> MetricsReport:
    """Per-class one-vs-rest metrics plus their macro averages."""
    counts = cm.counts
    total = cm.total
    per_class = []
    for c in range(cm.class_count):
        tp = int(counts[c, c])
        fn = int(counts[c].sum() - tp)
        fp = int(counts[:, c].sum() - tp)
        tn = total - tp - fn - fp
        precision = _ratio(tp, tp + fp)
        recall = _ratio(tp, tp + fn)
        f1 = _ratio(2.0 * precision * recall, precision + recall)
        specificity = _ratio(tn, fp + tn)
        per_class.append(
            ClassMetrics(
                label=c,
                tp=tp,
                tn=tn,
                fp=fp,
                fn=fn,
                precision=precision,
                recall=recall,
                f1=f1,
                sensitivity=recall,
                specificity=specificity,
                balanced_accuracy=(recall + specificity) / 2.0,
            )
        )

    def macro(attr: str) -> float:
        return float(np.mean([getattr(m, attr) for m in per_class]))

    return MetricsReport(
        accuracy=_ratio(float(np.trace(counts)), float(total)),
        precision=macro("precision"),
        recall=macro("recall"),
        f1=macro("f1"),
        sensitivity=macro("sensitivity"),
        specificity=macro("specificity"),
        balanced_accuracy=macro("balanced_accuracy"),
        per_class=tuple(per_class),
    )
