"""Metaheuristic wrapper feature selection: chaos-game optimization plus
eight comparator algorithms, from-scratch classifiers, the evaluation-metric
suite, and Friedman rank analysis."""

from .baselines import ALGORITHMS, optimize_baseline
from .cgo import CgoConfig, optimize
from .classifiers import ClassifierSpec, predict, train
from .core import (
    Agent,
    BinaryMask,
    FeatureDataset,
    OptimizerConfig,
    RunResult,
    SearchBounds,
    apply_mask,
    minmax_scale,
    seeded_rng,
)
from .fitness import FitnessConfig, WrapperObjective, binarize, evaluate
from .io import ResultRow, SyntheticSpec, generate_synthetic, load_csv, write_results
from .metrics import ConfusionMatrix, MetricsReport, compute_report, confusion
from .stats import RankTable, friedman

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "Agent",
    "BinaryMask",
    "CgoConfig",
    "ClassifierSpec",
    "ConfusionMatrix",
    "FeatureDataset",
    "FitnessConfig",
    "MetricsReport",
    "OptimizerConfig",
    "RankTable",
    "ResultRow",
    "RunResult",
    "SearchBounds",
    "SyntheticSpec",
    "WrapperObjective",
    "apply_mask",
    "binarize",
    "compute_report",
    "confusion",
    "evaluate",
    "friedman",
    "generate_synthetic",
    "load_csv",
    "minmax_scale",
    "optimize",
    "optimize_baseline",
    "predict",
    "seeded_rng",
    "train",
    "write_results",
]
