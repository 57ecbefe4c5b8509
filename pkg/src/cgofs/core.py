"""Domain types and the deterministic RNG contract shared by every optimizer.

All randomness in the package flows through numpy's PCG64 generator so that a
run is reproducible from its integer seed alone, on any platform. Parallel or
repeated runs must derive independent substreams via :func:`seeded_rng`'s
``stream`` argument instead of sharing one generator.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
import numpy as np

from .errors import DimMismatch, EmptyMask, LabelOutOfRange


def seeded_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Return a PCG64 generator for ``(seed, stream)``.

    Identical arguments yield bit-identical draw sequences across platforms
    and interpreter sessions. ``stream`` splits one experiment seed into
    independent substreams (one per optimizer run, repetition, ...).
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class SearchBounds:
    """Box constraints of the continuous search space."""

    dim: int
    lower: float = 0.0
    upper: float = 1.0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if not self.lower < self.upper:
            raise ValueError(f"need lower < upper, got [{self.lower}, {self.upper}]")

    @property
    def span(self) -> float:
        return self.upper - self.lower

    def clip(self, positions: np.ndarray) -> np.ndarray:
        """Boundary repair: clamp coordinates into [lower, upper]."""
        return np.clip(positions, self.lower, self.upper)


@dataclass(frozen=True)
class BinaryMask:
    """Boolean feature-inclusion vector; bit j keeps column j."""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.ndim != 1:
            raise ValueError("mask bits must be one-dimensional")
        if not np.isin(bits, (0, 1)).all():
            raise ValueError("mask bits must be 0 or 1")
        bits = bits.astype(np.uint8)
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def dim(self) -> int:
        return self.bits.shape[0]

    @property
    def selected_count(self) -> int:
        return int(self.bits.sum())

    @property
    def indices(self) -> np.ndarray:
        """Column indices of the selected features, in original order."""
        return np.flatnonzero(self.bits)

    def key(self) -> bytes:
        """Hashable identity of the mask, used for fitness caching."""
        return self.bits.tobytes()

    @classmethod
    def all_ones(cls, dim: int) -> "BinaryMask":
        return cls(np.ones(dim, dtype=np.uint8))


@dataclass
class Agent:
    """One continuous candidate position with (lazily set) fitness."""

    position: np.ndarray
    fitness: float | None = None


@dataclass(frozen=True)
class FeatureDataset:
    """Train/test feature matrices plus 0-based contiguous integer labels.

    Immutable after construction (arrays are marked read-only), hence safe to
    share across threads.
    """

    train_x: np.ndarray
    train_y: np.ndarray
    test_x: np.ndarray
    test_y: np.ndarray
    class_count: int
    feature_names: tuple[str, ...] | None = None

    def __post_init__(self):
        tx = np.array(self.train_x, dtype=np.float64, order="C")
        ex = np.array(self.test_x, dtype=np.float64, order="C")
        ty = np.array(self.train_y, dtype=np.int64)
        ey = np.array(self.test_y, dtype=np.int64)
        if tx.ndim != 2 or ex.ndim != 2:
            raise ValueError("feature matrices must be 2-D")
        if tx.shape[1] != ex.shape[1]:
            raise DimMismatch(
                f"train dim {tx.shape[1]} != test dim {ex.shape[1]}"
            )
        if tx.shape[1] < 1:
            raise ValueError("dataset needs at least one feature")
        if tx.shape[0] != ty.shape[0] or ex.shape[0] != ey.shape[0]:
            raise ValueError("feature/label row counts disagree")
        if self.class_count < 1:
            raise ValueError("class_count must be positive")
        if tx.shape[0] < self.class_count:
            raise ValueError("need at least one training row per class")
        for name, y in (("train", ty), ("test", ey)):
            if y.size and (y.min() < 0 or y.max() >= self.class_count):
                raise LabelOutOfRange(
                    f"{name} labels outside [0, {self.class_count})"
                )
        if not (np.isfinite(tx).all() and np.isfinite(ex).all()):
            raise ValueError("feature values must be finite")
        if self.feature_names is not None:
            names = tuple(self.feature_names)
            if len(names) != tx.shape[1]:
                raise DimMismatch("feature_names length != dim")
            object.__setattr__(self, "feature_names", names)
        for arr in (tx, ty, ex, ey):
            arr.setflags(write=False)
        object.__setattr__(self, "train_x", tx)
        object.__setattr__(self, "train_y", ty)
        object.__setattr__(self, "test_x", ex)
        object.__setattr__(self, "test_y", ey)

    @property
    def dim(self) -> int:
        return self.train_x.shape[1]

    @property
    def n_train(self) -> int:
        return self.train_x.shape[0]

    @property
    def n_test(self) -> int:
        return self.test_x.shape[0]


@dataclass(frozen=True)
class OptimizerConfig:
    """Shared optimizer budget: population size, iterations, search box."""

    bounds: SearchBounds
    population: int = 50
    iterations: int = 100

    def __post_init__(self):
        if self.population < 2:
            raise ValueError(f"population must be >= 2, got {self.population}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")


@dataclass(frozen=True)
class RunResult:
    """Outcome of one feature-selection run."""

    optimizer_name: str
    best_mask: BinaryMask
    best_fitness: float
    best_position: np.ndarray
    fitness_trace: np.ndarray
    evaluations: int
    wall_time: float
    rng_seed: int

    def __post_init__(self):
        trace = np.array(self.fitness_trace, dtype=np.float64)
        if np.any(np.diff(trace) > 0):
            raise ValueError("fitness_trace must be non-increasing")
        if self.evaluations <= 0:
            raise ValueError("evaluations must be positive")
        trace.setflags(write=False)
        pos = np.array(self.best_position, dtype=np.float64)
        pos.setflags(write=False)
        object.__setattr__(self, "fitness_trace", trace)
        object.__setattr__(self, "best_position", pos)


def encode_labels(raw_labels) -> tuple[np.ndarray, list[str]]:
    """Map arbitrary labels to 0-based contiguous ids by first occurrence."""
    mapping: dict[str, int] = {}
    codes = np.empty(len(raw_labels), dtype=np.int64)
    for i, label in enumerate(raw_labels):
        key = str(label)
        if key not in mapping:
            mapping[key] = len(mapping)
        codes[i] = mapping[key]
    return codes, list(mapping)


def apply_mask(dataset: FeatureDataset, mask: BinaryMask) -> FeatureDataset:
    """Keep only the columns where the mask bit is 1, in original order."""
    if mask.dim != dataset.dim:
        raise DimMismatch(f"mask dim {mask.dim} != dataset dim {dataset.dim}")
    if mask.selected_count == 0:
        raise EmptyMask("mask selects no features")
    cols = mask.indices
    names = None
    if dataset.feature_names is not None:
        names = tuple(dataset.feature_names[j] for j in cols)
    return FeatureDataset(
        train_x=dataset.train_x[:, cols],
        train_y=dataset.train_y,
        test_x=dataset.test_x[:, cols],
        test_y=dataset.test_y,
        class_count=dataset.class_count,
        feature_names=names,
    )


def minmax_scale(dataset: FeatureDataset) -> FeatureDataset:
    """Min-max scale all columns to [0, 1], fit on the train split only.

    Constant train columns map to 0. Off by default in the pipeline; KNN is
    scale-sensitive so the option has to exist.
    """
    lo = dataset.train_x.min(axis=0)
    hi = dataset.train_x.max(axis=0)
    span = hi - lo
    span[span == 0.0] = 1.0
    return replace(
        dataset,
        train_x=(dataset.train_x - lo) / span,
        test_x=(dataset.test_x - lo) / span,
    )
