"""Majority-class baseline."""

from __future__ import annotations

import numpy as np

from ..errors import TrainingError
from .base import SingleLabelView, TrainedLearner


class ZeroRModel(TrainedLearner):
    kind = "zero_r"

    def __init__(self, class_names, n_features, distribution: np.ndarray) -> None:
        super().__init__(class_names, n_features)
        self.distribution = np.asarray(distribution, dtype=np.float64)
        self.distribution.setflags(write=False)
        self.majority_class = int(np.argmax(self.distribution))

    def _distribution(self, row: np.ndarray) -> np.ndarray:
        return self.distribution.copy()

    def predict_distribution_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return np.tile(self.distribution, (X.shape[0], 1))


def train_zero_r(view: SingleLabelView) -> ZeroRModel:
    """Store the empirical class frequencies; argmax breaks ties toward the
    lowest category index."""
    if view.n == 0:
        raise TrainingError("cannot fit ZeroR on an empty view")
    counts = np.bincount(view.y, minlength=view.n_classes).astype(np.float64)
    return ZeroRModel(view.class_names, view.n_features, counts / view.n)
