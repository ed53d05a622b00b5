"""Incremental decision-tree induction gated by a concentration bound.

Instances are absorbed one at a time. Each leaf keeps sufficient statistics
(class-conditional category counts for nominal attributes, per-class
Gaussian summaries for numeric ones). Every ``grace_period`` instances the
leaf compares the two best information gains; it splits when their gap
beats the bound for the observed sample size, or when the bound itself has
shrunk below the tie-break threshold ``tau``.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import TrainingError
from .base import SingleLabelView, TrainedLearner
from .specs import HoeffdingSpec

N_NUMERIC_CANDIDATES = 10
_SQRT2 = math.sqrt(2.0)


def hoeffding_bound(value_range: float, delta: float, n: int) -> float:
    """Deviation bound for a mean of n observations of a statistic with the
    given value range, at confidence 1 - delta."""
    if value_range <= 0:
        raise ValueError(f"value range must be > 0, got {value_range}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return math.sqrt(value_range * value_range * math.log(1.0 / delta) / (2.0 * n))


def _entropy(counts: np.ndarray) -> float:
    total = counts.sum()
    if total <= 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def _gaussian_cdf(x: float, mean: np.ndarray, std: np.ndarray) -> np.ndarray:
    z = (x - mean) / np.where(std > 0, std, 1.0)
    cdf = 0.5 * (1.0 + np.array([math.erf(v / _SQRT2) for v in z]))
    # degenerate (zero variance) classes: step function at the mean
    return np.where(std > 0, cdf, (mean <= x) * 1.0)


class _Leaf:
    __slots__ = (
        "class_counts", "n_since_check", "nominal_counts", "numeric_stats",
        "numeric_lo", "numeric_hi", "prior",
    )

    def __init__(self, n_classes: int, seed_counts: np.ndarray | None, prior: np.ndarray) -> None:
        self.class_counts = (
            seed_counts.astype(np.float64).copy()
            if seed_counts is not None
            else np.zeros(n_classes, dtype=np.float64)
        )
        self.n_since_check = 0
        self.nominal_counts: dict[int, np.ndarray] = {}
        self.numeric_stats: dict[int, np.ndarray] = {}
        self.numeric_lo: dict[int, float] = {}
        self.numeric_hi: dict[int, float] = {}
        self.prior = prior

    def update(self, row: np.ndarray, y: int, categories) -> None:
        self.class_counts[y] += 1.0
        self.n_since_check += 1
        C = self.class_counts.shape[0]
        for j, cats in enumerate(categories):
            v = row[j]
            if math.isnan(v):
                continue
            if cats is not None:
                table = self.nominal_counts.get(j)
                if table is None:
                    table = np.zeros((C, len(cats)), dtype=np.float64)
                    self.nominal_counts[j] = table
                table[y, int(v)] += 1.0
            else:
                stats = self.numeric_stats.get(j)
                if stats is None:
                    stats = np.zeros((C, 3), dtype=np.float64)  # count, mean, M2
                    self.numeric_stats[j] = stats
                    self.numeric_lo[j] = v
                    self.numeric_hi[j] = v
                cnt = stats[y, 0] + 1.0
                delta = v - stats[y, 1]
                mean = stats[y, 1] + delta / cnt
                stats[y, 0] = cnt
                stats[y, 1] = mean
                stats[y, 2] += delta * (v - mean)
                if v < self.numeric_lo[j]:
                    self.numeric_lo[j] = v
                if v > self.numeric_hi[j]:
                    self.numeric_hi[j] = v

    def distribution(self) -> np.ndarray:
        total = self.class_counts.sum()
        if total > 0:
            return self.class_counts / total
        ptotal = self.prior.sum()
        if ptotal > 0:
            return self.prior / ptotal
        return np.full(self.class_counts.shape[0], 1.0 / self.class_counts.shape[0])


class _Split:
    __slots__ = ("col", "threshold", "children", "majority_branch")

    def __init__(self, col: int, threshold: float | None, children: list, majority_branch: int) -> None:
        self.col = col
        self.threshold = threshold  # None for nominal multiway splits
        self.children = children
        self.majority_branch = majority_branch

    def branch_for(self, value: float) -> int:
        if math.isnan(value):
            return self.majority_branch
        if self.threshold is None:
            return int(value)
        return 0 if value <= self.threshold else 1


def _nominal_gain(table: np.ndarray) -> float:
    n_obs = table.sum()
    if n_obs <= 0:
        return 0.0
    parent = table.sum(axis=1)
    col_totals = table.sum(axis=0)
    weighted = 0.0
    for v in range(table.shape[1]):
        if col_totals[v] > 0:
            weighted += (col_totals[v] / n_obs) * _entropy(table[:, v])
    return _entropy(parent) - weighted


def _numeric_gain(stats: np.ndarray, lo: float, hi: float) -> tuple[float, float, np.ndarray, np.ndarray]:
    """Best (gain, threshold, est_left_counts, est_right_counts) over
    candidate thresholds spaced across the observed range."""
    counts = stats[:, 0]
    n_obs = counts.sum()
    if n_obs <= 0 or hi <= lo:
        return 0.0, lo, counts * 0.0, counts.copy()
    means = stats[:, 1]
    variances = np.where(counts > 0, stats[:, 2] / np.maximum(counts, 1.0), 0.0)
    stds = np.sqrt(variances)
    parent_entropy = _entropy(counts)
    best = (0.0, lo, counts * 0.0, counts.copy())
    for t in np.linspace(lo, hi, N_NUMERIC_CANDIDATES + 2)[1:-1]:
        left = counts * _gaussian_cdf(float(t), means, stds)
        right = counts - left
        wl, wr = left.sum(), right.sum()
        if wl <= 0 or wr <= 0:
            continue
        gain = parent_entropy - (wl * _entropy(left) + wr * _entropy(right)) / n_obs
        if gain > best[0]:
            best = (float(gain), float(t), left, right)
    return best


class HoeffdingTreeModel(TrainedLearner):
    kind = "hoeffding"

    def __init__(self, class_names, n_features, spec: HoeffdingSpec, feature_categories) -> None:
        super().__init__(class_names, n_features)
        self.spec = spec
        self.feature_categories = tuple(feature_categories)
        self.root = _Leaf(self.n_classes, None, np.zeros(self.n_classes))
        self.n_nodes = 1

    # -- training ---------------------------------------------------------

    def absorb(self, row: np.ndarray, y: int) -> None:
        parent, branch, node = None, -1, self.root
        while isinstance(node, _Split):
            parent, branch = node, node.branch_for(row[node.col])
            node = node.children[branch]
        node.update(row, y, self.feature_categories)
        if node.n_since_check >= self.spec.grace_period:
            node.n_since_check = 0
            split = self._attempt_split(node)
            if split is not None:
                if parent is None:
                    self.root = split
                else:
                    parent.children[branch] = split
                self.n_nodes += len(split.children)

    def _attempt_split(self, leaf: _Leaf) -> _Split | None:
        if (leaf.class_counts > 0).sum() < 2:
            return None
        n_total = leaf.class_counts.sum()
        best_gain, second_gain = 0.0, 0.0
        best: tuple | None = None
        for j, cats in enumerate(self.feature_categories):
            if cats is not None:
                table = leaf.nominal_counts.get(j)
                if table is None:
                    continue
                gain = _nominal_gain(table)
                candidate = ("nominal", j, None, table)
            else:
                stats = leaf.numeric_stats.get(j)
                if stats is None:
                    continue
                gain, threshold, left, right = _numeric_gain(
                    stats, leaf.numeric_lo[j], leaf.numeric_hi[j]
                )
                candidate = ("numeric", j, threshold, (left, right))
            if gain > best_gain:
                best_gain, second_gain, best = gain, best_gain, candidate
            elif gain > second_gain:
                second_gain = gain
        if best is None or best_gain <= 0.0:
            return None
        eps = hoeffding_bound(math.log2(self.n_classes), self.spec.delta, int(n_total))
        if not (best_gain - second_gain > eps or eps < self.spec.tau):
            return None

        kind, col, threshold, payload = best
        prior = leaf.class_counts.copy()
        if kind == "nominal":
            table = payload
            children = [
                _Leaf(self.n_classes, table[:, v], prior)
                for v in range(table.shape[1])
            ]
            majority = int(np.argmax(table.sum(axis=0)))
        else:
            left, right = payload
            children = [
                _Leaf(self.n_classes, left, prior),
                _Leaf(self.n_classes, right, prior),
            ]
            majority = 0 if left.sum() >= right.sum() else 1
        return _Split(col, threshold, children, majority)

    # -- prediction -------------------------------------------------------

    def _find_leaf(self, row: np.ndarray) -> _Leaf:
        node = self.root
        while isinstance(node, _Split):
            node = node.children[node.branch_for(row[node.col])]
        return node

    def _distribution(self, row: np.ndarray) -> np.ndarray:
        leaf = self._find_leaf(row)
        if self.spec.leaf_strategy == "nb" and leaf.class_counts.sum() >= 1:
            return self._nb_distribution(leaf, row)
        return leaf.distribution()

    def _nb_distribution(self, leaf: _Leaf, row: np.ndarray) -> np.ndarray:
        C = self.n_classes
        n = leaf.class_counts.sum()
        scores = np.log((leaf.class_counts + 1.0) / (n + C))
        for j, table in leaf.nominal_counts.items():
            v = row[j]
            if math.isnan(v):
                continue
            V = table.shape[1]
            class_totals = table.sum(axis=1)
            scores += np.log((table[:, int(v)] + 1.0) / (class_totals + V))
        for j, stats in leaf.numeric_stats.items():
            x = row[j]
            if math.isnan(x):
                continue
            counts = stats[:, 0]
            if counts.sum() <= 0:
                continue
            obs = counts > 0
            pooled_var = max(
                float((stats[obs, 2]).sum() / counts[obs].sum()), 1e-6
            )
            means = np.where(obs, stats[:, 1], float((counts * stats[:, 1]).sum() / counts.sum()))
            variances = np.where(obs, np.maximum(stats[:, 2] / np.maximum(counts, 1.0), 1e-6), pooled_var)
            scores += -0.5 * (math.log(2 * math.pi) + np.log(variances) + (x - means) ** 2 / variances)
        scores -= scores.max()
        probs = np.exp(scores)
        return probs / probs.sum()


def train_hoeffding(view: SingleLabelView, spec: HoeffdingSpec | None = None) -> HoeffdingTreeModel:
    """Fit by streaming the view's rows through the tree in stored order."""
    if view.n == 0:
        raise TrainingError("cannot fit a Hoeffding tree on an empty view")
    spec = spec or HoeffdingSpec()
    model = HoeffdingTreeModel(
        view.class_names, view.n_features, spec, view.feature_categories
    )
    X, y = view.X, view.y
    for i in range(view.n):
        model.absorb(X[i], int(y[i]))
    return model
