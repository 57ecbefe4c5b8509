import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgofs.core import (
    BinaryMask,
    FeatureDataset,
    RunResult,
    SearchBounds,
    apply_mask,
    encode_labels,
    minmax_scale,
    seeded_rng,
)
from cgofs.errors import DimMismatch, EmptyMask, LabelOutOfRange


def make_dataset(dim=4, n_train=8, n_test=4, seed=0):
    rng = seeded_rng(seed)
    return FeatureDataset(
        train_x=rng.random((n_train, dim)),
        train_y=np.arange(n_train) % 2,
        test_x=rng.random((n_test, dim)),
        test_y=np.arange(n_test) % 2,
        class_count=2,
        feature_names=tuple(f"f{j}" for j in range(dim)),
    )


class TestBinaryMask:
    def test_selected_count_matches_popcount(self):
        mask = BinaryMask(np.array([1, 0, 1, 1, 0]))
        assert mask.selected_count == 3
        assert mask.dim == 5
        assert list(mask.indices) == [0, 2, 3]

    def test_rejects_non_binary(self):
        with pytest.raises(ValueError):
            BinaryMask(np.array([0, 2, 1]))


class TestApplyMask:
    def test_selects_columns_in_order(self):
        ds = make_dataset(dim=4)
        out = apply_mask(ds, BinaryMask(np.array([1, 0, 1, 0])))
        assert out.dim == 2
        np.testing.assert_array_equal(out.train_x, ds.train_x[:, [0, 2]])
        np.testing.assert_array_equal(out.test_x, ds.test_x[:, [0, 2]])
        np.testing.assert_array_equal(out.train_y, ds.train_y)
        assert out.feature_names == ("f0", "f2")

    def test_all_ones_is_identity(self):
        ds = make_dataset(dim=4)
        out = apply_mask(ds, BinaryMask.all_ones(4))
        np.testing.assert_array_equal(out.train_x, ds.train_x)
        np.testing.assert_array_equal(out.test_x, ds.test_x)

    def test_128_column_subset_matches_naive_copy(self):
        # Oracle: element-by-element copy loop over the selected columns.
        rng = seeded_rng(7)
        ds = make_dataset(dim=128, n_train=10, n_test=5, seed=7)
        bits = np.zeros(128, dtype=np.uint8)
        bits[rng.choice(128, size=64, replace=False)] = 1
        mask = BinaryMask(bits)
        out = apply_mask(ds, mask)
        assert out.dim == 64
        selected = [j for j in range(128) if bits[j] == 1]
        for i in range(ds.n_train):
            for new_j, old_j in enumerate(selected):
                assert out.train_x[i, new_j] == ds.train_x[i, old_j]
        for i in range(ds.n_test):
            for new_j, old_j in enumerate(selected):
                assert out.test_x[i, new_j] == ds.test_x[i, old_j]

    def test_empty_mask_raises(self):
        ds = make_dataset(dim=4)
        with pytest.raises(EmptyMask):
            apply_mask(ds, BinaryMask(np.zeros(4, dtype=np.uint8)))

    def test_dim_mismatch_raises(self):
        ds = make_dataset(dim=4)
        with pytest.raises(DimMismatch):
            apply_mask(ds, BinaryMask(np.array([1, 0, 1])))

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=12))
    @settings(max_examples=40, deadline=None)
    def test_output_dim_equals_selected_count(self, bits):
        mask = BinaryMask(np.array(bits, dtype=np.uint8))
        ds = make_dataset(dim=len(bits))
        if mask.selected_count == 0:
            with pytest.raises(EmptyMask):
                apply_mask(ds, mask)
        else:
            out = apply_mask(ds, mask)
            assert out.dim == mask.selected_count
            # Re-applying an all-ones mask is the identity on columns.
            again = apply_mask(out, BinaryMask.all_ones(out.dim))
            np.testing.assert_array_equal(again.train_x, out.train_x)


class TestSeededRng:
    def test_same_seed_same_stream(self):
        a = seeded_rng(42).random(10)
        b = seeded_rng(42).random(10)
        np.testing.assert_array_equal(a, b)

    def test_different_seeds_differ(self):
        a = seeded_rng(1).random(10)
        b = seeded_rng(2).random(10)
        assert np.any(a != b)

    def test_substreams_differ(self):
        a = seeded_rng(5, stream=0).random(10)
        b = seeded_rng(5, stream=1).random(10)
        assert np.any(a != b)

    def test_integer_draws_roughly_uniform(self):
        rng = seeded_rng(123)
        draws = rng.integers(0, 4, size=10_000)
        freq = np.bincount(draws, minlength=4) / 10_000
        assert freq.min() >= 0.22 and freq.max() <= 0.28

    def test_reals_in_unit_interval(self):
        draws = seeded_rng(9).random(1000)
        assert draws.min() >= 0.0 and draws.max() < 1.0


class TestFeatureDataset:
    def test_rejects_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            FeatureDataset(
                train_x=np.zeros((4, 3)),
                train_y=np.array([0, 1, 0, 1]),
                test_x=np.zeros((2, 2)),
                test_y=np.array([0, 1]),
                class_count=2,
            )

    def test_rejects_label_out_of_range(self):
        with pytest.raises(LabelOutOfRange):
            FeatureDataset(
                train_x=np.zeros((4, 2)),
                train_y=np.array([0, 1, 2, 1]),
                test_x=np.zeros((2, 2)),
                test_y=np.array([0, 1]),
                class_count=2,
            )

    def test_rejects_non_finite(self):
        x = np.zeros((4, 2))
        x[1, 1] = np.nan
        with pytest.raises(ValueError):
            FeatureDataset(
                train_x=x,
                train_y=np.array([0, 1, 0, 1]),
                test_x=np.zeros((2, 2)),
                test_y=np.array([0, 1]),
                class_count=2,
            )

    def test_arrays_are_read_only(self):
        ds = make_dataset()
        with pytest.raises(ValueError):
            ds.train_x[0, 0] = 1.0


class TestSearchBounds:
    def test_degenerate_bounds_rejected(self):
        with pytest.raises(ValueError):
            SearchBounds(dim=3, lower=1.0, upper=1.0)

    def test_clip(self):
        b = SearchBounds(dim=2)
        np.testing.assert_array_equal(
            b.clip(np.array([-0.5, 1.5])), np.array([0.0, 1.0])
        )


class TestRunResult:
    def test_rejects_increasing_trace(self):
        with pytest.raises(ValueError):
            RunResult(
                optimizer_name="X",
                best_mask=BinaryMask(np.array([1])),
                best_fitness=0.5,
                best_position=np.array([0.9]),
                fitness_trace=np.array([0.5, 0.6]),
                evaluations=10,
                wall_time=0.0,
                rng_seed=0,
            )

    def test_rejects_zero_evaluations(self):
        with pytest.raises(ValueError):
            RunResult(
                optimizer_name="X",
                best_mask=BinaryMask(np.array([1])),
                best_fitness=0.5,
                best_position=np.array([0.9]),
                fitness_trace=np.array([0.5]),
                evaluations=0,
                wall_time=0.0,
                rng_seed=0,
            )


def test_encode_labels_first_occurrence_order():
    codes, names = encode_labels(["cat", "dog", "cat", "bird"])
    assert names == ["cat", "dog", "bird"]
    np.testing.assert_array_equal(codes, [0, 1, 0, 2])


def test_minmax_scale_fits_on_train_only():
    ds = make_dataset(dim=3, seed=11)
    scaled = minmax_scale(ds)
    assert scaled.train_x.min() >= 0.0 and scaled.train_x.max() <= 1.0
    lo = ds.train_x.min(axis=0)
    hi = ds.train_x.max(axis=0)
    np.testing.assert_allclose(scaled.test_x, (ds.test_x - lo) / (hi - lo))


def test_minmax_scale_constant_column_maps_to_zero():
    ds = FeatureDataset(
        train_x=np.array([[1.0, 2.0], [1.0, 4.0]]),
        train_y=np.array([0, 1]),
        test_x=np.array([[1.0, 3.0]]),
        test_y=np.array([0]),
        class_count=2,
    )
    scaled = minmax_scale(ds)
    np.testing.assert_array_equal(scaled.train_x[:, 0], [0.0, 0.0])
