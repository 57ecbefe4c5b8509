"""Dataset ingestion, synthetic data with known ground truth, and results files.

Feature CSV contract: UTF-8, LF lines, header ``f0,...,f{dim-1},label``, one
sample per line, '.' decimal point, label in the final column; train and test
live in separate files. Floats are serialized with their shortest round-trip
representation.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .core import BinaryMask, FeatureDataset, encode_labels, seeded_rng
from .errors import DimMismatch, ParseError, UnknownLabel


@dataclass(frozen=True)
class FeatureFileHeader:
    dim: int
    class_names: tuple[str, ...]
    split: str  # {train, test}


@dataclass(frozen=True)
class SyntheticSpec:
    """Desk-scale dataset with a known informative-feature mask.

    Adjacent class centroids sit ``class_separation`` apart in the
    informative subspace (per-column step ``class_separation/sqrt(n_inf)``,
    unit residual spread), so every informative column carries a share of
    the signal. Noise columns are class-independent Gaussians with standard
    deviation ``noise_scale``.
    """

    n_informative: int = 5
    n_noise: int = 15
    n_samples_per_class: int = 60
    class_count: int = 2
    class_separation: float = 3.0
    noise_scale: float = 1.0
    seed: int = 0
    train_fraction: float = 0.8

    def __post_init__(self):
        if self.n_informative < 1:
            raise ValueError("need at least one informative feature")
        if self.class_separation < 0:
            raise ValueError("class_separation must be >= 0")
        if self.class_count < 2:
            raise ValueError("need at least two classes")


def generate_synthetic(spec: SyntheticSpec) -> tuple[FeatureDataset, BinaryMask]:
    """Deterministic dataset plus the true informative-column mask.

    Columns are shuffled so informative features sit at random indices; the
    split is stratified per class at ``train_fraction``.
    """
    rng = seeded_rng(spec.seed)
    dim = spec.n_informative + spec.n_noise
    n_per = spec.n_samples_per_class
    total = n_per * spec.class_count
    x = np.empty((total, dim))
    x[:, : spec.n_informative] = rng.normal(
        0.0, 1.0, size=(total, spec.n_informative)
    )
    x[:, spec.n_informative :] = rng.normal(
        0.0, spec.noise_scale, size=(total, spec.n_noise)
    )
    y = np.repeat(np.arange(spec.class_count), n_per)
    step = spec.class_separation / np.sqrt(spec.n_informative)
    for c in range(spec.class_count):
        x[y == c, : spec.n_informative] += c * step
    column_order = rng.permutation(dim)
    x = x[:, column_order]
    truth = np.zeros(dim, dtype=np.uint8)
    truth[column_order < spec.n_informative] = 1

    train_rows: list[np.ndarray] = []
    test_rows: list[np.ndarray] = []
    for c in range(spec.class_count):
        rows = np.flatnonzero(y == c)
        rows = rows[rng.permutation(rows.size)]
        n_train = int(round(rows.size * spec.train_fraction))
        train_rows.append(rows[:n_train])
        test_rows.append(rows[n_train:])
    train_idx = np.concatenate(train_rows)
    test_idx = np.concatenate(test_rows)
    train_idx = train_idx[rng.permutation(train_idx.size)]
    test_idx = test_idx[rng.permutation(test_idx.size)]

    dataset = FeatureDataset(
        train_x=x[train_idx],
        train_y=y[train_idx],
        test_x=x[test_idx],
        test_y=y[test_idx],
        class_count=spec.class_count,
        feature_names=tuple(f"f{j}" for j in range(dim)),
    )
    return dataset, BinaryMask(truth)


def _parse_feature_file(path: Path) -> tuple[FeatureFileHeader, np.ndarray, list[str]]:
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if len(header) < 2 or header[-1] != "label":
            raise ParseError(f"{path}: line 1: header must end with 'label'")
        dim = len(header) - 1
        values: list[list[float]] = []
        labels: list[str] = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != dim + 1:
                raise ParseError(
                    f"{path}: line {line_no}: expected {dim + 1} fields, got {len(row)}"
                )
            try:
                values.append([float(v) for v in row[:-1]])
            except ValueError as exc:
                raise ParseError(f"{path}: line {line_no}: {exc}") from None
            labels.append(row[-1])
    if not values:
        raise ParseError(f"{path}: no data rows")
    matrix = np.array(values, dtype=np.float64)
    split = "test" if "test" in path.name else "train"
    return FeatureFileHeader(dim, (), split), matrix, labels


def derive_test_path(train_path: str | Path) -> Path:
    train_path = Path(train_path)
    candidate = train_path.with_name(train_path.name.replace("train", "test"))
    if candidate == train_path:
        raise ParseError(
            f"cannot derive test file from {train_path}; pass it explicitly"
        )
    return candidate


def load_csv(train_path: str | Path, test_path: str | Path | None = None) -> FeatureDataset:
    """Load a train/test feature-CSV pair into a validated dataset.

    Labels are encoded to 0-based ids by first occurrence in the train file;
    a test label absent from train raises UnknownLabel.
    """
    train_path = Path(train_path)
    test_path = Path(test_path) if test_path is not None else derive_test_path(train_path)
    train_header, train_x, train_labels = _parse_feature_file(train_path)
    test_header, test_x, test_labels = _parse_feature_file(test_path)
    if train_header.dim != test_header.dim:
        raise DimMismatch(
            f"train has {train_header.dim} features, test has {test_header.dim}"
        )
    train_y, class_names = encode_labels(train_labels)
    mapping = {name: i for i, name in enumerate(class_names)}
    test_y = np.empty(len(test_labels), dtype=np.int64)
    for i, label in enumerate(test_labels):
        if label not in mapping:
            raise UnknownLabel(f"{test_path}: label {label!r} never seen in train")
        test_y[i] = mapping[label]
    return FeatureDataset(
        train_x=train_x,
        train_y=train_y,
        test_x=test_x,
        test_y=test_y,
        class_count=len(class_names),
        feature_names=tuple(f"f{j}" for j in range(train_header.dim)),
    )


def write_dataset_csv(x: np.ndarray, y: np.ndarray, class_names, path: str | Path):
    """Emit one split in the feature-CSV contract."""
    x = np.asarray(x, dtype=np.float64)
    with open(path, "w", newline="\n", encoding="utf-8") as handle:
        handle.write(",".join([f"f{j}" for j in range(x.shape[1])] + ["label"]) + "\n")
        for row, label in zip(x, y):
            cells = [repr(float(v)) for v in row]
            cells.append(str(class_names[int(label)]))
            handle.write(",".join(cells) + "\n")


RESULT_COLUMNS = (
    "optimizer",
    "classifier",
    "recall",
    "precision",
    "f1",
    "accuracy",
    "balanced_accuracy",
    "wall_time",
    "seed",
    "selected_count",
)


@dataclass(frozen=True)
class ResultRow:
    """One (optimizer, classifier) line of a results table."""

    optimizer: str
    classifier: str
    recall: float
    precision: float
    f1: float
    accuracy: float
    balanced_accuracy: float
    wall_time: float
    seed: int
    selected_count: float


def _cell(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def write_results(rows, path: str | Path, fmt: str = "csv"):
    """Write result rows as CSV or as a JSON mirror of the same content."""
    rows = list(rows)
    if fmt == "csv":
        with open(path, "w", newline="\n", encoding="utf-8") as handle:
            handle.write(",".join(RESULT_COLUMNS) + "\n")
            for row in rows:
                handle.write(
                    ",".join(_cell(getattr(row, col)) for col in RESULT_COLUMNS) + "\n"
                )
    elif fmt == "json":
        payload = [
            {col: getattr(row, col) for col in RESULT_COLUMNS} for row in rows
        ]
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2)
            handle.write("\n")
    else:
        raise ValueError(f"unknown results format {fmt!r}")


def read_results(path: str | Path, fmt: str | None = None) -> list[ResultRow]:
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix == ".json" else "csv"
    casts = {f.name: f.type for f in fields(ResultRow)}
    rows: list[ResultRow] = []
    if fmt == "json":
        with open(path, encoding="utf-8") as handle:
            payload = json.load(handle)
        records = payload
    else:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            records = list(reader)
    for record in records:
        kwargs = {}
        for name, kind in casts.items():
            raw = record[name]
            if kind == "float":
                kwargs[name] = float(raw)
            elif kind == "int":
                kwargs[name] = int(raw)
            else:
                kwargs[name] = str(raw)
        rows.append(ResultRow(**kwargs))
    return rows
