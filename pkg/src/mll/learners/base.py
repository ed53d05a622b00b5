"""Shared learner plumbing: single-target views and the fitted-model contract."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import PredictionError, TrainingError


@dataclass(frozen=True)
class SingleLabelView:
    """A single-target projection of a dataset.

    ``X`` is (n, m) float64 with NaN marking missing cells; nominal columns
    hold category indexes. ``y`` holds target category indexes and is never
    missing.
    """

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]
    feature_categories: tuple[tuple[str, ...] | None, ...]
    class_names: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.X.ndim != 2 or self.X.shape[1] != len(self.feature_names):
            raise TrainingError("feature matrix does not match the feature metadata")
        if len(self.feature_categories) != len(self.feature_names):
            raise TrainingError("feature metadata lengths disagree")
        if self.y.shape != (self.X.shape[0],):
            raise TrainingError("target vector length does not match the rows")
        if len(self.class_names) < 1:
            raise TrainingError("target needs at least one category")
        if self.y.size and (self.y.min() < 0 or self.y.max() >= len(self.class_names)):
            raise TrainingError("target values outside the category range")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)


class TrainedLearner:
    """A fitted single-target classifier; immutable once constructed.

    ``predict_distribution`` returns a nonnegative vector with one entry per
    target category, summing to 1.
    """

    kind = "base"

    def __init__(self, class_names: tuple[str, ...], n_features: int) -> None:
        self.class_names = tuple(class_names)
        self.n_features = int(n_features)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def predict_distribution(self, row: np.ndarray) -> np.ndarray:
        row = np.asarray(row, dtype=np.float64)
        if row.shape != (self.n_features,):
            raise PredictionError(
                f"expected {self.n_features} feature values, got shape {row.shape}"
            )
        return self._distribution(row)

    def predict_distribution_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise PredictionError(
                f"expected (n, {self.n_features}) feature matrix, got shape {X.shape}"
            )
        return np.stack([self._distribution(X[i]) for i in range(X.shape[0])])

    def _distribution(self, row: np.ndarray) -> np.ndarray:
        raise NotImplementedError
