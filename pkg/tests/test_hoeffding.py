import math

import numpy as np
import pytest

from mll.learners import HoeffdingSpec, SingleLabelView, hoeffding_bound, train_hoeffding
from mll.learners.hoeffding import _Leaf, _Split


def binary_view(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    cats = tuple(("0", "1") for _ in range(X.shape[1]))
    names = tuple(f"f{j}" for j in range(X.shape[1]))
    return SingleLabelView(X, y, names, cats, ("0", "1"))


def two_level_concept(features: np.ndarray) -> np.ndarray:
    """Depth-2 decision tree over binary features 0..2 (feature 3 is noise):
    split on f0; the f0=1 branch follows f1, the f0=0 branch inverts f2."""
    f0, f1, f2 = features[:, 0], features[:, 1], features[:, 2]
    return np.where(f0 == 1, f1, 1 - f2).astype(np.int64)


def sample_concept(n: int, seed: int):
    rng = np.random.default_rng(seed)
    X = np.column_stack([
        (rng.random(n) < 0.5),
        (rng.random(n) < 0.8),
        (rng.random(n) < 0.8),
        (rng.random(n) < 0.5),
    ]).astype(np.float64)
    return X, two_level_concept(X)


class TestHoeffdingBound:
    def test_closed_form_value(self):
        # sqrt(ln(1e7) / 2000), frozen from the formula
        expected = math.sqrt(math.log(1e7) / 2000.0)
        got = hoeffding_bound(1.0, 1e-7, 1000)
        assert got == pytest.approx(expected, abs=1e-15)
        assert got == pytest.approx(0.08977, abs=1e-4)

    def test_quadrupling_n_halves_epsilon(self):
        a = hoeffding_bound(1.0, 0.01, 500)
        b = hoeffding_bound(1.0, 0.01, 2000)
        assert a == pytest.approx(2 * b, rel=1e-12)

    def test_boundaries_rejected(self):
        with pytest.raises(ValueError):
            hoeffding_bound(1.0, 1.0, 10)
        with pytest.raises(ValueError):
            hoeffding_bound(1.0, 0.0, 10)
        with pytest.raises(ValueError):
            hoeffding_bound(0.0, 0.5, 10)
        with pytest.raises(ValueError):
            hoeffding_bound(1.0, 0.5, 0)


class TestTreeGrowth:
    def test_stump_when_fewer_than_grace_period(self):
        X, y = sample_concept(150, seed=1)
        model = train_hoeffding(binary_view(X, y), HoeffdingSpec(grace_period=200))
        assert isinstance(model.root, _Leaf)
        # stump predicts the majority class everywhere
        dist = model.predict_distribution(X[0])
        assert int(np.argmax(dist)) == int(np.bincount(y).argmax())

    def test_never_splits_before_grace_period_at_root(self):
        X, y = sample_concept(5000, seed=2)
        spec = HoeffdingSpec(grace_period=200, delta=0.5, tau=10.0)  # eager split settings
        model = train_hoeffding(binary_view(X[:199], y[:199]), spec)
        assert isinstance(model.root, _Leaf)
        model = train_hoeffding(binary_view(X[:200], y[:200]), spec)
        assert isinstance(model.root, _Split)

    def test_recovers_synthetic_concept(self):
        X_train, y_train = sample_concept(50_000, seed=3)
        X_test, y_test = sample_concept(10_000, seed=4)
        model = train_hoeffding(binary_view(X_train, y_train))
        predicted = np.argmax(model.predict_distribution_batch(X_test), axis=1)
        accuracy = float((predicted == y_test).mean())
        assert accuracy >= 0.95

    def test_root_splits_on_the_generating_feature(self):
        X, y = sample_concept(20_000, seed=5)
        model = train_hoeffding(binary_view(X, y))
        assert isinstance(model.root, _Split)
        assert model.root.col == 0

    def test_determinism(self):
        X, y = sample_concept(3000, seed=6)
        a = train_hoeffding(binary_view(X, y))
        b = train_hoeffding(binary_view(X, y))
        queries = X[:50]
        assert (a.predict_distribution_batch(queries) == b.predict_distribution_batch(queries)).all()


class TestNumericSplits:
    def test_threshold_split_on_numeric_feature(self):
        rng = np.random.default_rng(7)
        x = rng.normal(0.0, 1.0, 8000)
        y = (x > 0.2).astype(np.int64)
        view = SingleLabelView(
            x.reshape(-1, 1), y, ("x",), (None,), ("neg", "pos")
        )
        model = train_hoeffding(view)
        assert isinstance(model.root, _Split)
        assert model.root.threshold is not None
        predicted = np.argmax(model.predict_distribution_batch(view.X), axis=1)
        assert float((predicted == y).mean()) >= 0.95

    def test_missing_values_follow_majority_branch(self):
        rng = np.random.default_rng(8)
        x = rng.normal(0.0, 1.0, 4000)
        y = (x > 0).astype(np.int64)
        x[::7] = np.nan  # missing cells never update numeric stats
        view = SingleLabelView(
            x.reshape(-1, 1), y, ("x",), (None,), ("neg", "pos")
        )
        model = train_hoeffding(view)
        dist = model.predict_distribution(np.array([np.nan]))
        assert abs(dist.sum() - 1.0) < 1e-9


class TestLeafStrategies:
    def test_nb_leaves_match_shape_and_sum(self):
        X, y = sample_concept(2000, seed=9)
        model = train_hoeffding(binary_view(X, y), HoeffdingSpec(leaf_strategy="nb"))
        dist = model.predict_distribution(X[0])
        assert dist.shape == (2,)
        assert abs(dist.sum() - 1.0) < 1e-9
