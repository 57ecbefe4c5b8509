import time

import numpy as np
import pytest
from PIL import Image

from featx.data import ImageFolderError, index_split
from featx.export import ExtractorConfig, finetune_and_export
from featx.cli import main

from cgofs.cli import main as cgofs_main
from cgofs.io import load_csv


def paint_toy_images(root, classes=("lesion", "normal"), per_class=10, start_seed=0):
    """Two visually distinct classes: bright blobs vs dark gradients."""
    rng = np.random.default_rng(start_seed)
    for c, name in enumerate(classes):
        class_dir = root / name
        class_dir.mkdir(parents=True)
        for i in range(per_class):
            base = rng.integers(0, 60, size=(32, 32, 3), dtype=np.uint8)
            if c == 0:
                base[8:24, 8:24] = rng.integers(180, 255, size=(16, 16, 3))
            else:
                base[:, :, 2] = np.linspace(0, 120, 32, dtype=np.uint8)[None, :]
            Image.fromarray(base, "RGB").resize((64, 64)).save(
                class_dir / f"img_{i:03d}.png"
            )


@pytest.fixture(scope="module")
def toy_folders(tmp_path_factory):
    root = tmp_path_factory.mktemp("images")
    paint_toy_images(root / "train", per_class=10, start_seed=0)
    paint_toy_images(root / "test", per_class=5, start_seed=99)
    return root


def quick_config(toy_folders, out_dir, seed=0):
    return ExtractorConfig(
        train_dir=str(toy_folders / "train"),
        test_dir=str(toy_folders / "test"),
        out_train=str(out_dir / "toy_train.csv"),
        out_test=str(out_dir / "toy_test.csv"),
        manifest=str(out_dir / "manifest.json"),
        epochs=1,
        batch_size=8,
        pretrained=False,
        seed=seed,
    )


class TestIndexing:
    def test_lexicographic_order_and_labels(self, toy_folders):
        index = index_split(toy_folders / "train")
        assert index.class_names == ("lesion", "normal")
        assert len(index.files) == 20
        assert list(index.files) == sorted(index.files)
        assert index.labels[:10] == (0,) * 10
        assert index.labels[10:] == (1,) * 10

    def test_missing_split_reported(self, tmp_path):
        with pytest.raises(ImageFolderError, match="not found"):
            index_split(tmp_path / "nope")

    def test_empty_class_dir_reported(self, tmp_path):
        (tmp_path / "a").mkdir()
        with pytest.raises(ImageFolderError, match="no images"):
            index_split(tmp_path)

    def test_class_mismatch_between_splits(self, tmp_path):
        paint_toy_images(tmp_path / "train", classes=("a", "b"), per_class=2)
        paint_toy_images(tmp_path / "test", classes=("a", "c"), per_class=2)
        config = ExtractorConfig(
            train_dir=str(tmp_path / "train"),
            test_dir=str(tmp_path / "test"),
            epochs=1,
            pretrained=False,
        )
        with pytest.raises(ImageFolderError, match="class folders differ"):
            finetune_and_export(config)

    def test_corrupt_image_named_in_error(self, tmp_path):
        paint_toy_images(tmp_path / "train", per_class=2)
        paint_toy_images(tmp_path / "test", per_class=2)
        bad = tmp_path / "train" / "lesion" / "img_000.png"
        bad.write_bytes(b"not an image")
        config = ExtractorConfig(
            train_dir=str(tmp_path / "train"),
            test_dir=str(tmp_path / "test"),
            out_train=str(tmp_path / "t.csv"),
            out_test=str(tmp_path / "e.csv"),
            manifest=str(tmp_path / "m.json"),
            epochs=1,
            pretrained=False,
        )
        with pytest.raises(ImageFolderError, match="img_000.png"):
            finetune_and_export(config)


class TestExportContract:
    def test_secondary_acceptance_contract(self, toy_folders, tmp_path):
        """Toy folders -> 128-column CSVs -> primary pipeline end-to-end."""
        start = time.perf_counter()
        config = quick_config(toy_folders, tmp_path)
        manifest = finetune_and_export(config)

        # CSV shape: 128 feature columns + label, one row per image.
        header = open(config.out_train).readline().strip().split(",")
        assert header == [f"f{j}" for j in range(128)] + ["label"]
        assert len(open(config.out_train).readlines()) == 21
        assert len(open(config.out_test).readlines()) == 11
        assert len(manifest["train_rows"]) == 20

        # Zero-error ingestion through the primary's loader.
        ds = load_csv(config.out_train, config.out_test)
        assert ds.dim == 128
        assert ds.n_train == 20 and ds.n_test == 10
        assert ds.class_count == 2

        # Full primary pipeline on the exported features.
        out = tmp_path / "results.csv"
        code = cgofs_main(
            [
                "run", "--train", config.out_train, "--test", config.out_test,
                "--optimizers", "CGO", "--classifiers", "SGD",
                "--population", "6", "--iterations", "2", "--seed", "1",
                "--out", str(out),
            ]
        )
        assert code == 0
        assert len(out.read_text().splitlines()) == 2  # header + 1 row
        elapsed = time.perf_counter() - start
        print(
            f"ACCEPTANCE extractor-contract: PASS (128-dim CSVs ingested, "
            f"pipeline ran, {elapsed:.0f}s < 600)"
        )
        assert elapsed < 600

    def test_rerun_reproducible(self, toy_folders, tmp_path):
        a_dir = tmp_path / "a"
        b_dir = tmp_path / "b"
        a_dir.mkdir()
        b_dir.mkdir()
        finetune_and_export(quick_config(toy_folders, a_dir, seed=4))
        finetune_and_export(quick_config(toy_folders, b_dir, seed=4))
        ds_a = load_csv(a_dir / "toy_train.csv", a_dir / "toy_test.csv")
        ds_b = load_csv(b_dir / "toy_train.csv", b_dir / "toy_test.csv")
        np.testing.assert_array_equal(ds_a.train_y, ds_b.train_y)
        np.testing.assert_allclose(ds_a.train_x, ds_b.train_x, atol=1e-4)
        np.testing.assert_allclose(ds_a.test_x, ds_b.test_x, atol=1e-4)

    def test_cli_runs(self, toy_folders, tmp_path, capsys):
        code = main(
            [
                "--train-dir", str(toy_folders / "train"),
                "--test-dir", str(toy_folders / "test"),
                "--out-train", str(tmp_path / "tr.csv"),
                "--out-test", str(tmp_path / "te.csv"),
                "--manifest", str(tmp_path / "m.json"),
                "--epochs", "1", "--batch-size", "8", "--no-pretrained",
                "--seed", "2",
            ]
        )
        assert code == 0
        assert "20 train rows" in capsys.readouterr().out

    def test_config_pins_contract_dimensions(self):
        with pytest.raises(ValueError):
            ExtractorConfig(train_dir="x", test_dir="y", embedding_dim=64)
        with pytest.raises(ValueError):
            ExtractorConfig(train_dir="x", test_dir="y", image_size=128)
