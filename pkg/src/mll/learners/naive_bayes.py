"""Naive Bayes over mixed nominal/numeric features.

Nominal likelihoods and class priors use add-one smoothing; numeric
features use one Gaussian per class with the variance floored at 1e-6.
Missing cells are skipped both when counting and when scoring.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import TrainingError
from .base import SingleLabelView, TrainedLearner

VAR_FLOOR = 1e-6
_LOG_2PI = math.log(2.0 * math.pi)


class NaiveBayesModel(TrainedLearner):
    kind = "naive_bayes"

    def __init__(
        self,
        class_names,
        n_features,
        log_priors: np.ndarray,
        nominal_log_tables: dict[int, np.ndarray],
        gaussians: dict[int, np.ndarray],
    ) -> None:
        super().__init__(class_names, n_features)
        self.log_priors = log_priors
        # col -> (n_classes, n_categories) log likelihoods
        self.nominal_log_tables = nominal_log_tables
        # col -> (n_classes, 2) mean / variance
        self.gaussians = gaussians

    def _log_posteriors(self, row: np.ndarray) -> np.ndarray:
        scores = self.log_priors.copy()
        for j, table in self.nominal_log_tables.items():
            v = row[j]
            if not math.isnan(v):
                scores += table[:, int(v)]
        for j, mv in self.gaussians.items():
            x = row[j]
            if not math.isnan(x):
                mean, var = mv[:, 0], mv[:, 1]
                scores += -0.5 * (_LOG_2PI + np.log(var) + (x - mean) ** 2 / var)
        return scores

    def _distribution(self, row: np.ndarray) -> np.ndarray:
        scores = self._log_posteriors(row)
        scores -= scores.max()
        probs = np.exp(scores)
        return probs / probs.sum()


def train_naive_bayes(view: SingleLabelView) -> NaiveBayesModel:
    if view.n == 0:
        raise TrainingError("cannot fit NaiveBayes on an empty view")
    C = view.n_classes
    counts = np.bincount(view.y, minlength=C).astype(np.float64)
    log_priors = np.log((counts + 1.0) / (view.n + C))

    class_masks = [view.y == c for c in range(C)]
    nominal_log_tables: dict[int, np.ndarray] = {}
    gaussians: dict[int, np.ndarray] = {}
    for j, categories in enumerate(view.feature_categories):
        col = view.X[:, j]
        observed = ~np.isnan(col)
        if categories is not None:
            V = len(categories)
            table = np.empty((C, V), dtype=np.float64)
            for c in range(C):
                mask = class_masks[c] & observed
                vc = np.bincount(col[mask].astype(np.int64), minlength=V).astype(np.float64)
                table[c] = np.log((vc + 1.0) / (mask.sum() + V))
            nominal_log_tables[j] = table
        else:
            if not observed.any():
                continue  # nothing to estimate; feature is skipped at scoring too
            pooled_mean = float(col[observed].mean())
            pooled_var = max(float(col[observed].var()), VAR_FLOOR)
            mv = np.empty((C, 2), dtype=np.float64)
            for c in range(C):
                mask = class_masks[c] & observed
                if mask.any():
                    vals = col[mask]
                    mv[c, 0] = vals.mean()
                    mv[c, 1] = max(float(vals.var()), VAR_FLOOR)
                else:
                    # unseen class/feature pairing: fall back to pooled stats
                    mv[c, 0] = pooled_mean
                    mv[c, 1] = pooled_var
            gaussians[j] = mv
    return NaiveBayesModel(
        view.class_names, view.n_features, log_priors, nominal_log_tables, gaussians
    )
