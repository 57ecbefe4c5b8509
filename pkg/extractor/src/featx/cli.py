"""Command-line front end mirroring ExtractorConfig."""

from __future__ import annotations

import argparse
import sys

from .data import ImageFolderError
from .export import ExtractorConfig, finetune_and_export


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="featx",
        description=(
            "Fine-tune a MobileNetV3-Large embedding network on labeled "
            "image folders and export 128-dim feature CSVs."
        ),
    )
    parser.add_argument("--train-dir", required=True)
    parser.add_argument("--test-dir", required=True)
    parser.add_argument("--out-train", default="train.csv")
    parser.add_argument("--out-test", default="test.csv")
    parser.add_argument("--manifest", default="manifest.json")
    parser.add_argument("--epochs", type=int, default=100)
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--learning-rate", type=float, default=1e-4)
    parser.add_argument("--dropout", type=float, default=0.38)
    parser.add_argument(
        "--no-pretrained",
        dest="pretrained",
        action="store_false",
        help="random backbone init (no ImageNet weight download)",
    )
    parser.add_argument(
        "--unfreeze-blocks",
        type=int,
        default=3,
        help="how many final backbone blocks to fine-tune",
    )
    parser.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = ExtractorConfig(
        train_dir=args.train_dir,
        test_dir=args.test_dir,
        out_train=args.out_train,
        out_test=args.out_test,
        manifest=args.manifest,
        epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.learning_rate,
        dropout=args.dropout,
        pretrained=args.pretrained,
        unfreeze_blocks=args.unfreeze_blocks,
        seed=args.seed,
    )
    try:
        manifest = finetune_and_export(config)
    except (ImageFolderError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(
        f"wrote {config.out_train}, {config.out_test}, {config.manifest} "
        f"({len(manifest['train_rows'])} train rows, "
        f"{len(manifest['test_rows'])} test rows)"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
