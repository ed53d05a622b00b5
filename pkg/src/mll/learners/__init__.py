"""Single-target learners used inside the problem-transformation ensembles."""

from __future__ import annotations

from .base import SingleLabelView, TrainedLearner
from .hoeffding import HoeffdingTreeModel, hoeffding_bound, train_hoeffding
from .knn import KnnModel, train_knn
from .naive_bayes import NaiveBayesModel, train_naive_bayes
from .ripper import Condition, RipperModel, Rule, foil_gain, prune_value, train_ripper
from .specs import (
    HoeffdingSpec,
    KnnSpec,
    LearnerSpec,
    NaiveBayesSpec,
    RipperSpec,
    ZeroRSpec,
)
from .zero_r import ZeroRModel, train_zero_r

__all__ = [
    "SingleLabelView",
    "TrainedLearner",
    "LearnerSpec",
    "ZeroRSpec",
    "NaiveBayesSpec",
    "KnnSpec",
    "HoeffdingSpec",
    "RipperSpec",
    "ZeroRModel",
    "NaiveBayesModel",
    "KnnModel",
    "HoeffdingTreeModel",
    "RipperModel",
    "Rule",
    "Condition",
    "train",
    "train_zero_r",
    "train_naive_bayes",
    "train_knn",
    "train_hoeffding",
    "train_ripper",
    "hoeffding_bound",
    "foil_gain",
    "prune_value",
]


def train(view: SingleLabelView, spec: LearnerSpec, seed: int = 1) -> TrainedLearner:
    """Fit the learner described by ``spec`` on the view."""
    if isinstance(spec, ZeroRSpec):
        return train_zero_r(view)
    if isinstance(spec, NaiveBayesSpec):
        return train_naive_bayes(view)
    if isinstance(spec, KnnSpec):
        return train_knn(view, spec.k)
    if isinstance(spec, HoeffdingSpec):
        return train_hoeffding(view, spec)
    if isinstance(spec, RipperSpec):
        return train_ripper(view, spec, seed=seed)
    raise TypeError(f"unknown learner spec {spec!r}")
