import numpy as np
import pytest

from mll.errors import PredictionError, TrainingError
from mll.learners import (
    SingleLabelView,
    train_knn,
    train_naive_bayes,
    train_zero_r,
)


def view_from(X, y, categories, class_names=("0", "1")):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    names = tuple(f"f{j}" for j in range(X.shape[1]))
    return SingleLabelView(X, y, names, tuple(categories), tuple(class_names))


class TestZeroR:
    def test_mode_and_distribution(self):
        view = view_from([[0.0]] * 3, [1, 1, 0], [None])
        model = train_zero_r(view)
        assert model.majority_class == 1
        dist = model.predict_distribution(np.array([123.0]))
        assert dist.tolist() == [1 / 3, 2 / 3]

    def test_same_vector_everywhere(self):
        view = view_from([[1.0], [2.0], [3.0]], [0, 1, 1], [None])
        model = train_zero_r(view)
        a = model.predict_distribution(np.array([0.0]))
        b = model.predict_distribution(np.array([99.0]))
        assert (a == b).all()

    def test_degenerate_single_class(self):
        view = view_from([[0.0]] * 4, [0, 0, 0, 0], [None], class_names=("only",))
        model = train_zero_r(view)
        assert model.predict_distribution(np.array([0.0])).tolist() == [1.0]

    def test_tie_goes_to_lowest_index(self):
        view = view_from([[0.0]] * 4, [0, 1, 1, 0], [None])
        assert train_zero_r(view).majority_class == 0

    def test_empty_view_rejected(self):
        view = view_from(np.empty((0, 1)), [], [None])
        with pytest.raises(TrainingError):
            train_zero_r(view)

    def test_training_accuracy_equals_majority_frequency(self):
        rng = np.random.default_rng(5)
        y = (rng.random(200) < 0.3).astype(np.int64)
        view = view_from(rng.normal(size=(200, 2)), y, [None, None])
        model = train_zero_r(view)
        predicted = np.argmax(model.predict_distribution_batch(view.X), axis=1)
        accuracy = float((predicted == y).mean())
        majority_freq = max(float(y.mean()), 1.0 - float(y.mean()))
        assert abs(accuracy - majority_freq) < 1e-12


class TestNaiveBayes:
    def test_perfectly_correlated_binary_feature(self):
        # 20 rows: feature value equals the class. With add-one smoothing,
        # P(c=v | f=v) = (11/12) by hand: prior 0.5, likelihoods 11/12 vs 1/12.
        X = [[0.0]] * 10 + [[1.0]] * 10
        y = [0] * 10 + [1] * 10
        view = view_from(X, y, [("0", "1")])
        model = train_naive_bayes(view)
        for v, cls in ((0.0, 0), (1.0, 1)):
            posterior = model.predict_distribution(np.array([v]))
            assert posterior[cls] == pytest.approx(11 / 12, abs=1e-12)
            assert posterior[cls] > 0.9

    def test_all_missing_gives_smoothed_priors(self):
        X = [[0.0], [0.0], [1.0], [1.0], [1.0]]
        view = view_from(X, [0, 0, 1, 1, 1], [("0", "1")])
        model = train_naive_bayes(view)
        posterior = model.predict_distribution(np.array([np.nan]))
        # smoothed priors: (2+1)/(5+2) and (3+1)/(5+2)
        assert posterior == pytest.approx([3 / 7, 4 / 7], abs=1e-12)

    def test_zero_variance_numeric_is_floored(self):
        X = [[5.0], [5.0], [7.0], [7.0]]
        view = view_from(X, [0, 0, 1, 1], [None])
        model = train_naive_bayes(view)
        dist = model.predict_distribution(np.array([5.0]))
        assert np.isfinite(dist).all()
        assert dist[0] > 0.999

    def test_distribution_sums_to_one(self):
        rng = np.random.default_rng(0)
        X = np.column_stack([
            rng.integers(0, 3, 100).astype(float),
            rng.normal(size=100),
        ])
        y = rng.integers(0, 3, 100)
        view = view_from(X, y, [("a", "b", "c"), None], class_names=("x", "y", "z"))
        model = train_naive_bayes(view)
        for i in range(10):
            dist = model.predict_distribution(X[i])
            assert abs(dist.sum() - 1.0) < 1e-9
            assert (dist >= 0).all()

    def test_empty_view_rejected(self):
        view = view_from(np.empty((0, 1)), [], [None])
        with pytest.raises(TrainingError):
            train_naive_bayes(view)


class TestKnn:
    def test_exact_match_is_one_hot(self):
        X = [[0.0, 1.0], [1.0, 0.0], [2.0, 2.0]]
        view = view_from(X, [0, 1, 1], [None, None])
        model = train_knn(view, k=1)
        dist = model.predict_distribution(np.array([1.0, 0.0]))
        assert dist.tolist() == [0.0, 1.0]

    def test_k_equals_n_gives_priors(self):
        X = np.arange(10, dtype=float).reshape(-1, 1)
        y = [0] * 6 + [1] * 4
        view = view_from(X, y, [None])
        model = train_knn(view, k=10)
        dist = model.predict_distribution(np.array([3.3]))
        assert dist.tolist() == [0.6, 0.4]

    def test_distance_ties_break_by_row_index(self):
        # two rows at the same distance from the query; k=1 must pick row 0
        X = [[0.0], [2.0]]
        view = view_from(X, [0, 1], [None])
        model = train_knn(view, k=1)
        dist = model.predict_distribution(np.array([1.0]))
        assert dist.tolist() == [1.0, 0.0]

    def test_nominal_mismatch_and_missing(self):
        X = [[0.0, 0.0], [1.0, np.nan]]
        view = view_from(X, [0, 1], [("a", "b"), ("x", "y")])
        model = train_knn(view, k=1)
        # query matches row 0 on both nominals; row 1 has one mismatch + one missing
        dist = model.predict_distribution(np.array([0.0, 0.0]))
        assert dist.tolist() == [1.0, 0.0]

    def test_k_larger_than_train_rejected(self):
        view = view_from([[0.0], [1.0]], [0, 1], [None])
        with pytest.raises(TrainingError):
            train_knn(view, k=3)

    def test_row_width_checked(self):
        view = view_from([[0.0, 1.0]], [0], [None, None], class_names=("a",))
        model = train_knn(view, k=1)
        with pytest.raises(PredictionError):
            model.predict_distribution(np.array([1.0]))
