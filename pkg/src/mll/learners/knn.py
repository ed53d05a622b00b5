"""Lazy k-nearest-neighbour classifier for mixed attributes.

Distance per attribute: nominal cells contribute 0/1 mismatch, numeric
cells |a-b| scaled by the training range, and any missing cell contributes
1. Neighbour ties at equal distance resolve toward the lower row index.
"""

from __future__ import annotations

import numpy as np

from ..errors import TrainingError
from .base import SingleLabelView, TrainedLearner


class KnnModel(TrainedLearner):
    kind = "knn"

    def __init__(self, class_names, n_features, k, X, y, nominal_mask, ranges) -> None:
        super().__init__(class_names, n_features)
        self.k = int(k)
        self.X = X
        self.y = y
        self.nominal_mask = nominal_mask  # (m,) bool
        self.ranges = ranges  # (m,) float; 0 where degenerate or nominal

    def _distances(self, row: np.ndarray) -> np.ndarray:
        X = self.X
        d = np.zeros(X.shape[0], dtype=np.float64)
        nom = self.nominal_mask
        if nom.any():
            # NaN != NaN, so missing cells fall out as mismatches here
            d += (X[:, nom] != row[nom]).sum(axis=1).astype(np.float64)
        num = ~nom
        if num.any():
            diff = np.abs(X[:, num] - row[num])
            ranges = self.ranges[num]
            scaled = np.where(ranges > 0, diff / np.where(ranges > 0, ranges, 1.0), (diff != 0) * 1.0)
            scaled = np.where(np.isnan(diff), 1.0, scaled)
            d += scaled.sum(axis=1)
        return d

    def _distribution(self, row: np.ndarray) -> np.ndarray:
        d = self._distances(row)
        order = np.argsort(d, kind="stable")[: self.k]
        votes = np.bincount(self.y[order], minlength=self.n_classes).astype(np.float64)
        return votes / self.k


def train_knn(view: SingleLabelView, k: int) -> KnnModel:
    if k > view.n:
        raise TrainingError(f"k={k} exceeds the {view.n} training instances")
    if k < 1:
        raise TrainingError("k must be >= 1")
    nominal_mask = np.array([c is not None for c in view.feature_categories], dtype=bool)
    ranges = np.zeros(view.n_features, dtype=np.float64)
    for j in range(view.n_features):
        if nominal_mask[j]:
            continue
        col = view.X[:, j]
        observed = col[~np.isnan(col)]
        if observed.size:
            ranges[j] = float(observed.max() - observed.min())
    return KnnModel(
        view.class_names, view.n_features, k, view.X, view.y, nominal_mask, ranges
    )
