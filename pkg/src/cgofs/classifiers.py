"""From-scratch classifiers used inside the fitness loop and for reporting.

KNN stores the training set and votes over Euclidean neighbors. SVM and SGD
are one-vs-rest linear models trained by mini-batch (sub)gradient descent on
hinge and logistic loss respectively. Everything is deterministic given the
spec and a seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import seeded_rng
from .errors import DimMismatch, NonFinite, SingleClass

KINDS = ("KNN", "SVM", "SGD")


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str = "SVM"
    knn_k: int = 5
    knn_metric: str = "euclidean"
    svm_c: float = 1.0
    sgd_loss: str = "log"  # {log, hinge}
    sgd_lr: float = 0.01
    sgd_epochs: int = 50
    sgd_batch: int = 32
    sgd_seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown classifier kind {self.kind!r}")
        if self.knn_k < 1:
            raise ValueError("knn_k must be >= 1")
        if self.knn_metric != "euclidean":
            raise ValueError("only Euclidean KNN is supported")
        if self.sgd_loss not in ("log", "hinge"):
            raise ValueError(f"unknown sgd_loss {self.sgd_loss!r}")
        if self.sgd_lr <= 0:
            raise ValueError("learning rate must be positive")


@dataclass(frozen=True)
class KnnModel:
    train_x: np.ndarray
    train_y: np.ndarray
    k: int
    class_count: int


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray  # (class_count, dim)
    bias: np.ndarray  # (class_count,)
    class_count: int


Model = KnnModel | LinearModel


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _fit_linear(
    x: np.ndarray,
    targets: np.ndarray,
    loss: str,
    lr: float,
    epochs: int,
    batch_size: int,
    l2: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Mini-batch descent on one-vs-rest linear scores.

    ``targets`` is the (n, classes) matrix of +/-1 labels. The L2 penalty
    applies to weights only, never the bias.
    """
    n, dim = x.shape
    classes = targets.shape[1]
    w = np.zeros((classes, dim))
    b = np.zeros(classes)
    batch = min(batch_size, n)
    full_batch = batch >= n  # order-invariant updates; skip the shuffle
    for _ in range(epochs):
        if full_batch:
            pairs = ((x, targets),)
        else:
            order = rng.permutation(n)
            pairs = (
                (x[order[s : s + batch]], targets[order[s : s + batch]])
                for s in range(0, n, batch)
            )
        for xb, tb in pairs:
            scores = xb @ w.T + b
            if loss == "hinge":
                coeff = np.where(tb * scores < 1.0, -tb, 0.0)
            else:  # logistic
                coeff = -tb * _sigmoid(-tb * scores)
            inv = 1.0 / xb.shape[0]
            grad_w = (coeff.T @ xb) * inv
            if l2:
                grad_w += l2 * w
            w -= lr * grad_w
            b -= lr * (coeff.sum(axis=0) * inv)
    if not (np.isfinite(w).all() and np.isfinite(b).all()):
        raise NonFinite("linear training diverged")
    return w, b


def train(
    spec: ClassifierSpec,
    x: np.ndarray,
    y: np.ndarray,
    rng: np.random.Generator | None = None,
) -> Model:
    """Fit a model; deterministic given spec (+ rng seed for SVM/SGD)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if x.ndim != 2 or x.shape[0] != y.shape[0]:
        raise ValueError("x must be (n, dim) with one label per row")
    if not np.isfinite(x).all():
        raise ValueError("training features must be finite")
    class_count = int(y.max()) + 1
    if np.unique(y).size < 2:
        raise SingleClass("training labels contain a single class")
    if spec.kind == "KNN":
        if spec.knn_k > x.shape[0]:
            raise ValueError("knn_k exceeds training-set size")
        return KnnModel(x, y, spec.knn_k, class_count)
    if rng is None:
        rng = seeded_rng(spec.sgd_seed)
    targets = np.where(y[:, None] == np.arange(class_count)[None, :], 1.0, -1.0)
    if class_count == 2:
        # Hinge and logistic losses are sign-symmetric, so the class-0
        # one-vs-rest row is exactly the negated class-1 row; train once.
        targets = targets[:, 1:]
    if spec.kind == "SVM":
        l2 = 1.0 / (spec.svm_c * x.shape[0])
        w, b = _fit_linear(
            x, targets, "hinge", spec.sgd_lr, spec.sgd_epochs, spec.sgd_batch, l2, rng
        )
    else:  # SGD
        w, b = _fit_linear(
            x, targets, spec.sgd_loss, spec.sgd_lr, spec.sgd_epochs, spec.sgd_batch,
            0.0, rng,
        )
    if class_count == 2:
        w = np.vstack([-w, w])
        b = np.concatenate([-b, b])
    return LinearModel(w, b, class_count)


def predict(model: Model, x: np.ndarray) -> np.ndarray:
    """One class id per row; all ties resolve to the smallest class id."""
    x = np.asarray(x, dtype=np.float64)
    if isinstance(model, KnnModel):
        if x.shape[1] != model.train_x.shape[1]:
            raise DimMismatch("query dim differs from training dim")
        # Squared Euclidean distances; stable argsort keeps neighbor choice
        # independent of training-row permutation up to exact distance ties.
        d2 = (
            (x * x).sum(axis=1)[:, None]
            - 2.0 * x @ model.train_x.T
            + (model.train_x * model.train_x).sum(axis=1)[None, :]
        )
        out = np.empty(x.shape[0], dtype=np.int64)
        for i in range(x.shape[0]):
            neighbors = np.argsort(d2[i], kind="stable")[: model.k]
            votes = np.bincount(model.train_y[neighbors], minlength=model.class_count)
            out[i] = int(np.argmax(votes))  # argmax -> smallest id on ties
        return out
    if x.shape[1] != model.weights.shape[1]:
        raise DimMismatch("query dim differs from training dim")
    scores = x @ model.weights.T + model.bias
    return np.argmax(scores, axis=1).astype(np.int64)
