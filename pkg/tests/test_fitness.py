import itertools

import numpy as np
import pytest

from cgofs.classifiers import predict, train
from cgofs.core import BinaryMask, seeded_rng
from cgofs.errors import DimMismatch
from cgofs.fitness import (
    FitnessConfig,
    WrapperObjective,
    binarize,
    evaluate,
    stratified_folds,
    stratified_holdout,
)
from cgofs.io import SyntheticSpec, generate_synthetic


def oracle_fitness(objective, bits, config):
    """Independent recomposition of the wrapper objective for one mask.

    Reuses the classifier by contract (same split, same seed) but re-derives
    column selection, error computation, and the weighted combination from
    scratch, without touching the module's cache or helpers.
    """
    selected = [j for j in range(len(bits)) if bits[j] == 1]
    if not selected:
        return config.penalty
    x = objective.x[:, selected]
    rng = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(objective.classifier_seed))
    )
    model = train(config.classifier, x[objective.fit_idx], objective.y[objective.fit_idx], rng)
    pred = predict(model, x[objective.val_idx])
    wrong = sum(int(p != t) for p, t in zip(pred, objective.y[objective.val_idx]))
    error = wrong / len(objective.val_idx)
    return config.error_weight * error + (1 - config.error_weight) * (
        len(selected) / len(bits)
    )


class TestBinarize:
    def test_threshold_cases(self):
        mask = binarize(np.array([0.7, 0.4, 0.9]), 0.5)
        np.testing.assert_array_equal(mask.bits, [1, 0, 1])

    def test_exact_threshold_is_zero(self):
        mask = binarize(np.array([0.5, 0.50000001]), 0.5)
        np.testing.assert_array_equal(mask.bits, [0, 1])

    def test_all_zeros(self):
        mask = binarize(np.zeros(4), 0.5)
        assert mask.selected_count == 0


class TestSplits:
    def test_holdout_stratified_and_disjoint(self):
        y = np.array([0] * 10 + [1] * 6 + [2] * 4)
        fit_idx, val_idx = stratified_holdout(y, 0.2, seeded_rng(0))
        assert set(fit_idx) | set(val_idx) == set(range(20))
        assert set(fit_idx) & set(val_idx) == set()
        for c in range(3):
            assert (y[fit_idx] == c).sum() >= 1
            assert (y[val_idx] == c).sum() >= 1

    def test_folds_cover_everything(self):
        y = np.array([0] * 12 + [1] * 13)
        fold_of = stratified_folds(y, 5, seeded_rng(1))
        assert fold_of.shape == (25,)
        assert set(fold_of) == set(range(5))


def small_dataset(dim=6, seed=0):
    ds, _ = generate_synthetic(
        SyntheticSpec(
            n_informative=2,
            n_noise=dim - 2,
            n_samples_per_class=25,
            class_separation=2.0,
            seed=seed,
        )
    )
    return ds


class TestWrapperObjective:
    def test_lambda_one_is_pure_error(self):
        ds = small_dataset()
        config = FitnessConfig(error_weight=1.0)
        obj = WrapperObjective(ds.train_x, ds.train_y, config, seeded_rng(3))
        value = obj.fitness_for_mask(BinaryMask.all_ones(ds.dim))
        assert value == oracle_fitness(obj, [1] * ds.dim, config)
        assert 0.0 <= value <= 1.0

    def test_lambda_zero_is_size_ratio(self):
        ds = small_dataset(dim=10)
        config = FitnessConfig(error_weight=0.0)
        obj = WrapperObjective(ds.train_x, ds.train_y, config, seeded_rng(3))
        bits = np.zeros(10, dtype=np.uint8)
        bits[[1, 4, 7]] = 1
        assert obj.fitness_for_mask(BinaryMask(bits)) == pytest.approx(0.3)

    def test_exhaustive_masks_match_oracle(self):
        ds = small_dataset(dim=6)
        config = FitnessConfig()
        obj = WrapperObjective(ds.train_x, ds.train_y, config, seeded_rng(5))
        for bits in itertools.product((0, 1), repeat=6):
            mask = BinaryMask(np.array(bits, dtype=np.uint8))
            got = obj.fitness_for_mask(mask)
            want = oracle_fitness(obj, bits, config)
            assert got == pytest.approx(want, abs=1e-12)
            if mask.selected_count:
                assert 0.0 <= got <= 1.0
            else:
                assert got > 1.0

    def test_same_mask_same_fitness_across_positions(self):
        ds = small_dataset()
        obj = WrapperObjective(ds.train_x, ds.train_y, FitnessConfig(), seeded_rng(2))
        a = obj(np.array([0.9, 0.1, 0.8, 0.2, 0.7, 0.3]))
        b = obj(np.array([0.6, 0.4, 0.99, 0.01, 0.51, 0.49]))
        assert a == b

    def test_cache_order_independent(self):
        ds = small_dataset()
        masks = [BinaryMask(np.array(b, dtype=np.uint8)) for b in
                 [(1, 0, 0, 1, 1, 0), (0, 1, 1, 0, 0, 1), (1, 1, 1, 1, 1, 1)]]
        fwd = WrapperObjective(ds.train_x, ds.train_y, FitnessConfig(), seeded_rng(4))
        rev = WrapperObjective(ds.train_x, ds.train_y, FitnessConfig(), seeded_rng(4))
        values_fwd = [fwd.fitness_for_mask(m) for m in masks]
        values_rev = [rev.fitness_for_mask(m) for m in reversed(masks)]
        assert values_fwd == list(reversed(values_rev))

    def test_empty_mask_penalty_dominates(self):
        ds = small_dataset()
        config = FitnessConfig()
        obj = WrapperObjective(ds.train_x, ds.train_y, config, seeded_rng(6))
        empty = obj.fitness_for_mask(BinaryMask(np.zeros(6, dtype=np.uint8)))
        assert empty == pytest.approx(1.99)
        assert empty > 1.0
        full = obj.fitness_for_mask(BinaryMask.all_ones(6))
        assert full <= 1.0 < empty

    def test_size_term_monotone_in_selected_count(self):
        config = FitnessConfig(error_weight=0.5)
        dim = 8
        for count in range(1, dim):
            low = (1 - config.error_weight) * count / dim
            high = (1 - config.error_weight) * (count + 1) / dim
            assert high > low

    def test_kfold_error_in_unit_interval(self):
        ds = small_dataset()
        config = FitnessConfig(inner_eval="kfold", folds=4)
        obj = WrapperObjective(ds.train_x, ds.train_y, config, seeded_rng(7))
        value = obj.fitness_for_mask(BinaryMask.all_ones(ds.dim))
        assert 0.0 <= value <= 1.0

    def test_dim_mismatch(self):
        ds = small_dataset()
        obj = WrapperObjective(ds.train_x, ds.train_y, FitnessConfig(), seeded_rng(8))
        with pytest.raises(DimMismatch):
            obj(np.zeros(3))


def test_evaluate_function_matches_fresh_objective():
    ds = small_dataset()
    position = np.array([0.9, 0.8, 0.1, 0.2, 0.6, 0.4])
    config = FitnessConfig()
    a = evaluate(position, ds, config, seeded_rng(10))
    b = WrapperObjective(ds.train_x, ds.train_y, config, seeded_rng(10))(position)
    assert a == b


def test_config_validation():
    with pytest.raises(ValueError):
        FitnessConfig(error_weight=1.5)
    with pytest.raises(ValueError):
        FitnessConfig(threshold=0.0)
    with pytest.raises(ValueError):
        FitnessConfig(inner_eval="bootstrap")
