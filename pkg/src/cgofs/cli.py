"""Command-line harness: feature selection, test-set scoring, rank analysis.

Subcommands:
  run   select features on the train split per optimizer, score each final
        classifier on the masked test split, write per-run and aggregated rows
  rank  Friedman mean ranks over one or more results files
  synth write a synthetic train/test/truth/manifest bundle

Feature selection never touches the test split; it is consulted only after
the best mask per run is fixed.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import baselines, cgo, io
from .classifiers import ClassifierSpec, predict, train
from .core import (
    BinaryMask,
    FeatureDataset,
    OptimizerConfig,
    RunResult,
    SearchBounds,
    minmax_scale,
    seeded_rng,
)
from .errors import CgofsError, InsufficientBlocks
from .fitness import FitnessConfig, WrapperObjective
from .metrics import MetricsReport, compute_report, confusion
from .stats import friedman

# Benchmark-table order; stream ids derive from this, not from CLI order.
ALL_OPTIMIZERS = ("PSO", "MVO", "GWO", "MFO", "WOA", "FFA", "BAT", "HGS", "CGO")
ALL_CLASSIFIERS = ("SGD", "KNN", "SVM")

_FS_STREAM_STRIDE = 10_000
_FINAL_STREAM_BASE = 1_000_000


@dataclass(frozen=True)
class ExperimentConfig:
    optimizers: tuple[str, ...] = ALL_OPTIMIZERS
    classifiers: tuple[str, ...] = ALL_CLASSIFIERS
    population: int = 50
    iterations: int = 100
    repetitions: int = 1
    seed: int = 0
    scale: bool = False
    fitness: FitnessConfig = field(default_factory=FitnessConfig)

    def __post_init__(self):
        if not self.optimizers or not self.classifiers:
            raise ValueError("optimizer and classifier lists must be non-empty")
        for name in self.optimizers:
            if name not in ALL_OPTIMIZERS:
                raise ValueError(f"unknown optimizer {name!r}")
        for name in self.classifiers:
            if name not in ALL_CLASSIFIERS:
                raise ValueError(f"unknown classifier {name!r}")
        if not 1 <= self.repetitions <= 999:
            raise ValueError("repetitions must be in [1, 999]")  # stream-id space


def select_features(
    dataset: FeatureDataset,
    optimizer: str,
    config: ExperimentConfig,
    repetition: int,
) -> RunResult:
    """One FS run; reads only the train split of ``dataset``."""
    stream = ALL_OPTIMIZERS.index(optimizer) * _FS_STREAM_STRIDE + repetition
    rng = seeded_rng(config.seed, stream)
    objective = WrapperObjective(
        dataset.train_x, dataset.train_y, config.fitness, rng
    )
    bounds = SearchBounds(dim=dataset.dim)
    if optimizer == "CGO":
        opt_config = cgo.CgoConfig(
            bounds=bounds,
            population=config.population,
            iterations=config.iterations,
        )
        return cgo.optimize(
            objective,
            opt_config,
            rng,
            rng_seed=config.seed,
            mask_threshold=config.fitness.threshold,
        )
    opt_config = OptimizerConfig(
        bounds=bounds,
        population=config.population,
        iterations=config.iterations,
    )
    return baselines.optimize_baseline(
        optimizer,
        objective,
        opt_config,
        rng,
        rng_seed=config.seed,
        mask_threshold=config.fitness.threshold,
    )


def score_classifier(
    dataset: FeatureDataset,
    mask: BinaryMask,
    classifier: str,
    config: ExperimentConfig,
    optimizer: str,
    repetition: int,
) -> MetricsReport:
    """Train on the full masked train split, score the masked test split."""
    cols = mask.indices
    stream = (
        _FINAL_STREAM_BASE
        + ALL_OPTIMIZERS.index(optimizer) * _FS_STREAM_STRIDE
        + repetition * 10
        + ALL_CLASSIFIERS.index(classifier)
    )
    rng = seeded_rng(config.seed, stream)
    start = time.perf_counter()
    model = train(
        ClassifierSpec(kind=classifier),
        dataset.train_x[:, cols],
        dataset.train_y,
        rng,
    )
    predicted = predict(model, dataset.test_x[:, cols])
    elapsed = time.perf_counter() - start
    report = compute_report(
        confusion(dataset.test_y, predicted, dataset.class_count)
    )
    return dataclasses.replace(report, wall_time=elapsed)


def _to_row(
    optimizer: str,
    classifier: str,
    report: MetricsReport,
    fs_result: RunResult,
    seed: int,
) -> io.ResultRow:
    return io.ResultRow(
        optimizer=optimizer,
        classifier=classifier,
        recall=report.recall,
        precision=report.precision,
        f1=report.f1,
        accuracy=report.accuracy,
        balanced_accuracy=report.balanced_accuracy,
        wall_time=fs_result.wall_time,
        seed=seed,
        selected_count=float(fs_result.best_mask.selected_count),
    )


def aggregate_rows(per_run: list[io.ResultRow], seed: int) -> list[io.ResultRow]:
    """Arithmetic mean of the numeric columns per (optimizer, classifier)."""
    grouped: dict[tuple[str, str], list[io.ResultRow]] = {}
    for row in per_run:
        grouped.setdefault((row.optimizer, row.classifier), []).append(row)
    numeric = (
        "recall",
        "precision",
        "f1",
        "accuracy",
        "balanced_accuracy",
        "wall_time",
        "selected_count",
    )
    out = []
    for (optimizer, classifier), rows in grouped.items():
        means = {
            col: float(np.mean([getattr(r, col) for r in rows])) for col in numeric
        }
        out.append(
            io.ResultRow(
                optimizer=optimizer, classifier=classifier, seed=seed, **means
            )
        )
    return out


def run_experiment(
    dataset: FeatureDataset, config: ExperimentConfig
) -> tuple[list[io.ResultRow], list[io.ResultRow]]:
    """Full wrapper-FS experiment; returns (aggregated, per-run) rows.

    The FS phase receives only the train split; no quantity derived from the
    test split reaches any optimizer or the fitness objective.
    """
    per_run: list[io.ResultRow] = []
    for optimizer in config.optimizers:
        for rep in range(config.repetitions):
            fs_result = select_features(dataset, optimizer, config, rep)
            mask = fs_result.best_mask
            if mask.selected_count == 0:
                # Degenerate run; keep reporting total with the full set.
                print(
                    f"warning: {optimizer} rep {rep} selected no features; "
                    "scoring with all features",
                    file=sys.stderr,
                )
                mask = BinaryMask.all_ones(dataset.dim)
            for classifier in config.classifiers:
                report = score_classifier(
                    dataset, mask, classifier, config, optimizer, rep
                )
                per_run.append(
                    _to_row(optimizer, classifier, report, fs_result, config.seed)
                )
    return aggregate_rows(per_run, config.seed), per_run


def _runs_path(out: Path) -> Path:
    return out.with_name(out.stem + "_runs" + out.suffix)


def _synthetic_spec_from_args(args) -> io.SyntheticSpec:
    return io.SyntheticSpec(
        n_informative=args.informative,
        n_noise=args.noise,
        n_samples_per_class=args.samples_per_class,
        class_count=args.classes,
        class_separation=args.separation,
        noise_scale=args.noise_scale,
        seed=args.data_seed,
    )


def _add_synth_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--informative", type=int, default=5)
    parser.add_argument("--noise", type=int, default=15)
    parser.add_argument("--samples-per-class", type=int, default=60)
    parser.add_argument("--classes", type=int, default=2)
    parser.add_argument("--separation", type=float, default=3.0)
    parser.add_argument("--noise-scale", type=float, default=1.0)
    parser.add_argument("--data-seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cgofs",
        description="Metaheuristic wrapper feature selection benchmark harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the selection + scoring experiment")
    run.add_argument("--train", help="train-split feature CSV")
    run.add_argument("--test", help="test-split feature CSV (else derived)")
    run.add_argument(
        "--synthetic",
        action="store_true",
        help="use the built-in synthetic dataset instead of CSV files",
    )
    _add_synth_flags(run)
    run.add_argument(
        "--optimizers",
        default=",".join(ALL_OPTIMIZERS),
        help="comma-separated subset of " + ",".join(ALL_OPTIMIZERS),
    )
    run.add_argument(
        "--classifiers",
        default=",".join(ALL_CLASSIFIERS),
        help="comma-separated subset of " + ",".join(ALL_CLASSIFIERS),
    )
    run.add_argument("--population", type=int, default=50)
    run.add_argument("--iterations", type=int, default=100)
    run.add_argument("--repetitions", type=int, default=1)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument(
        "--lambda",
        dest="error_weight",
        type=float,
        default=0.99,
        help="weight on classification error vs subset size",
    )
    run.add_argument("--threshold", type=float, default=0.5)
    run.add_argument("--inner-eval", choices=("holdout", "kfold"), default="holdout")
    run.add_argument("--folds", type=int, default=5)
    run.add_argument(
        "--inner-classifier", choices=ALL_CLASSIFIERS, default="SVM",
        help="classifier scored inside the fitness function",
    )
    run.add_argument("--scale", action="store_true", help="min-max scale (train fit)")
    run.add_argument("--out", default="results.csv")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--config", help="JSON config file; wins over flags")

    rank = sub.add_parser("rank", help="Friedman mean ranks over results files")
    rank.add_argument("results", nargs="+", help="results files from `run`")
    rank.add_argument(
        "--metrics",
        default="recall,precision,f1,accuracy,balanced_accuracy",
        help="metric columns used as blocks",
    )
    rank.add_argument(
        "--classifiers", default=None, help="restrict blocks to these classifiers"
    )
    rank.add_argument(
        "--direction", choices=("maximize", "minimize"), default="maximize"
    )
    rank.add_argument("--out", default=None, help="optional mean-rank output file")
    rank.add_argument("--format", choices=("csv", "json"), default="csv")

    synth = sub.add_parser("synth", help="write a synthetic dataset bundle")
    synth.add_argument("--out-dir", default="synthetic")
    _add_synth_flags(synth)

    return parser


def _apply_config_file(args: argparse.Namespace, parser: argparse.ArgumentParser):
    """Overlay a JSON config; file values win over flags, with a warning."""
    if not getattr(args, "config", None):
        return
    with open(args.config, encoding="utf-8") as handle:
        overrides = json.load(handle)
    defaults = {
        action.dest: action.default
        for action in parser._subparsers._group_actions[0].choices["run"]._actions
    }
    for key, value in overrides.items():
        dest = key.replace("-", "_")
        if dest == "lambda":
            dest = "error_weight"
        if not hasattr(args, dest):
            raise ValueError(f"unknown config key {key!r}")
        current = getattr(args, dest)
        if current != defaults.get(dest) and current != value:
            print(
                f"warning: config file overrides --{key.replace('_', '-')}"
                f" ({current!r} -> {value!r})",
                file=sys.stderr,
            )
        setattr(args, dest, value)


def _experiment_from_args(args) -> tuple[FeatureDataset, ExperimentConfig]:
    if not args.synthetic and not args.train:
        raise ValueError("pass --synthetic or --train PATH")
    if args.synthetic:
        dataset, _ = io.generate_synthetic(_synthetic_spec_from_args(args))
    else:
        dataset = io.load_csv(args.train, args.test)
    if args.scale:
        dataset = minmax_scale(dataset)
    fitness = FitnessConfig(
        error_weight=args.error_weight,
        threshold=args.threshold,
        classifier=ClassifierSpec(kind=args.inner_classifier),
        inner_eval=args.inner_eval,
        folds=args.folds,
    )
    config = ExperimentConfig(
        optimizers=tuple(args.optimizers.split(",")),
        classifiers=tuple(args.classifiers.split(",")),
        population=args.population,
        iterations=args.iterations,
        repetitions=args.repetitions,
        seed=args.seed,
        scale=args.scale,
        fitness=fitness,
    )
    return dataset, config


def cmd_run(args, parser) -> int:
    _apply_config_file(args, parser)
    dataset, config = _experiment_from_args(args)
    aggregated, per_run = run_experiment(dataset, config)
    out = Path(args.out)
    io.write_results(aggregated, out, args.format)
    io.write_results(per_run, _runs_path(out), args.format)
    print(f"wrote {len(aggregated)} aggregated rows to {out}")
    print(f"wrote {len(per_run)} per-run rows to {_runs_path(out)}")
    return 0


def build_rank_blocks(
    result_files, metric_names, classifier_filter
) -> tuple[np.ndarray, list[str], list[str]]:
    """Score matrix (blocks x optimizers) from results files.

    One block per (file, classifier, metric); every block must cover the
    same optimizer set.
    """
    treatments: list[str] | None = None
    blocks: list[list[float]] = []
    labels: list[str] = []
    for file_path in result_files:
        rows = io.read_results(file_path)
        classifiers = sorted(
            {r.classifier for r in rows}, key=lambda c: (ALL_CLASSIFIERS + (c,)).index(c)
        )
        if classifier_filter:
            classifiers = [c for c in classifiers if c in classifier_filter]
        for classifier in classifiers:
            subset = [r for r in rows if r.classifier == classifier]
            names = sorted(
                {r.optimizer for r in subset},
                key=lambda o: (ALL_OPTIMIZERS + (o,)).index(o),
            )
            if treatments is None:
                treatments = names
            elif names != treatments:
                raise InsufficientBlocks(
                    f"{file_path}: optimizer set {names} differs from {treatments}"
                )
            by_opt = {r.optimizer: r for r in subset}
            if len(by_opt) != len(subset):
                raise InsufficientBlocks(
                    f"{file_path}: duplicate optimizer rows for {classifier}; "
                    "rank expects aggregated results"
                )
            for metric in metric_names:
                blocks.append(
                    [getattr(by_opt[o], metric) for o in treatments]
                )
                labels.append(f"{Path(file_path).stem}:{classifier}:{metric}")
    if treatments is None or len(treatments) < 2:
        raise InsufficientBlocks("need at least two optimizers to rank")
    return np.array(blocks), treatments, labels


def cmd_rank(args) -> int:
    metric_names = [m.strip() for m in args.metrics.split(",") if m.strip()]
    classifier_filter = (
        tuple(args.classifiers.split(",")) if args.classifiers else None
    )
    scores, treatments, _ = build_rank_blocks(
        args.results, metric_names, classifier_filter
    )
    table = friedman(scores, direction=args.direction)
    order = np.argsort(table.mean_ranks, kind="stable")
    print(f"blocks={scores.shape[0]} treatments={len(treatments)}")
    for idx in order:
        print(f"{treatments[idx]:>6s}  mean rank {table.mean_ranks[idx]:.4f}")
    print(f"chi-square statistic = {table.statistic:.6f}")
    print(f"p-value = {table.p_value:.6g}")
    if args.out:
        payload = [
            {"optimizer": treatments[i], "mean_rank": float(table.mean_ranks[i])}
            for i in range(len(treatments))
        ]
        if args.format == "json":
            body = {
                "mean_ranks": payload,
                "statistic": table.statistic,
                "p_value": table.p_value,
            }
            Path(args.out).write_text(json.dumps(body, indent=2) + "\n")
        else:
            lines = ["optimizer,mean_rank"]
            lines += [f"{p['optimizer']},{repr(p['mean_rank'])}" for p in payload]
            Path(args.out).write_text("\n".join(lines) + "\n")
    return 0


def cmd_synth(args) -> int:
    spec = _synthetic_spec_from_args(args)
    dataset, truth = io.generate_synthetic(spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    class_names = [f"c{c}" for c in range(spec.class_count)]
    io.write_dataset_csv(
        dataset.train_x, dataset.train_y, class_names, out_dir / "train.csv"
    )
    io.write_dataset_csv(
        dataset.test_x, dataset.test_y, class_names, out_dir / "test.csv"
    )
    (out_dir / "truth.json").write_text(
        json.dumps(
            {
                "bits": truth.bits.tolist(),
                "indices": truth.indices.tolist(),
            },
            indent=2,
        )
        + "\n"
    )
    (out_dir / "manifest.json").write_text(
        json.dumps(dataclasses.asdict(spec), indent=2) + "\n"
    )
    print(f"wrote train/test/truth/manifest under {out_dir}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args, parser)
        if args.command == "rank":
            return cmd_rank(args)
        return cmd_synth(args)
    except (CgofsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
