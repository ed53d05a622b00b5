"""Problem-transformation ensembles: independent per-label models, chains,
dependency-tree chains, and the labelset-powerset reduction.

Every fitted model answers with one confidence per label; the bipartition
thresholds those confidences (except the powerset model, which commits to
the most probable labelset seen in training) and the ranking sorts labels
by descending confidence with index order breaking ties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import LABEL_CATEGORIES, MultiLabelDataset
from .errors import PredictionError, StructureError, TrainingError
from .learners import LearnerSpec, SingleLabelView, TrainedLearner, train

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class MultiLabelPrediction:
    """Per-instance confidences, thresholded label set, and label ranking.

    ``ranking[j]`` is the 1-based rank of label j; rank 1 is the label the
    model is most confident about.
    """

    confidences: tuple[float, ...]
    bipartition: frozenset[int]
    ranking: tuple[int, ...]


def _ranking_from_confidences(conf: np.ndarray) -> tuple[int, ...]:
    order = sorted(range(len(conf)), key=lambda j: (-conf[j], j))
    ranks = [0] * len(conf)
    for position, j in enumerate(order):
        ranks[j] = position + 1
    return tuple(ranks)


def _prediction_from_confidences(conf: np.ndarray, threshold: float) -> MultiLabelPrediction:
    bipartition = frozenset(int(j) for j in np.flatnonzero(conf >= threshold))
    return MultiLabelPrediction(
        tuple(float(c) for c in conf), bipartition, _ranking_from_confidences(conf)
    )


def br_transform(ds: MultiLabelDataset) -> list[SingleLabelView]:
    """One single-target view per label: all non-label attributes as
    features, the label bits as the target. Row count is preserved."""
    if ds.k < 1:
        raise TrainingError("dataset has no label columns")
    feats = list(ds.schema.feature_indices)
    X = ds.values[:, feats]
    names = tuple(ds.schema.attributes[j].name for j in feats)
    cats = tuple(ds.schema.attributes[j].categories for j in feats)
    views = []
    for j in ds.schema.label_indices:
        y = ds.values[:, j].astype(np.int64)
        views.append(SingleLabelView(X, y, names, cats, LABEL_CATEGORIES))
    return views


def _chained_view(ds: MultiLabelDataset, label_j: int, given: list[int]) -> SingleLabelView:
    """View for one label with the true bits of ``given`` labels appended
    as extra binary features."""
    feats = list(ds.schema.feature_indices)
    X = ds.values[:, feats]
    names = [ds.schema.attributes[j].name for j in feats]
    cats = [ds.schema.attributes[j].categories for j in feats]
    if given:
        given_cols = [ds.schema.label_indices[g] for g in given]
        X = np.hstack([X, ds.values[:, given_cols]])
        for g in given:
            names.append(f"given:{ds.schema.label_names[g]}")
            cats.append(LABEL_CATEGORIES)
    y = ds.values[:, ds.schema.label_indices[label_j]].astype(np.int64)
    return SingleLabelView(X, y, tuple(names), tuple(cats), LABEL_CATEGORIES)


class MultiLabelModel:
    """Base for fitted transformations; immutable after training."""

    kind = "base"

    def __init__(self, schema, threshold: float) -> None:
        self.schema = schema
        self.threshold = float(threshold)
        self.label_names = schema.label_names

    @property
    def k(self) -> int:
        return len(self.label_names)

    def _check_rows(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.float64)
        single = rows.ndim == 1
        if single:
            rows = rows.reshape(1, -1)
        if rows.shape[1] != self.schema.n_attributes:
            raise PredictionError(
                f"expected {self.schema.n_attributes} attribute values, "
                f"got {rows.shape[1]}"
            )
        return rows

    def confidences(self, rows: np.ndarray) -> np.ndarray:
        """(n, k) per-label confidences for full-width instance rows."""
        rows = self._check_rows(rows)
        feats = list(self.schema.feature_indices)
        return self._confidences_from_features(rows[:, feats])

    def predict(self, row: np.ndarray, threshold: float | None = None) -> MultiLabelPrediction:
        return self.predict_batch(np.asarray(row).reshape(1, -1), threshold)[0]

    def predict_batch(
        self, rows: np.ndarray, threshold: float | None = None
    ) -> list[MultiLabelPrediction]:
        t = self.threshold if threshold is None else float(threshold)
        conf = self.confidences(rows)
        return [_prediction_from_confidences(conf[i], t) for i in range(conf.shape[0])]

    def predict_dataset(
        self, ds: MultiLabelDataset, threshold: float | None = None
    ) -> list[MultiLabelPrediction]:
        if ds.schema != self.schema:
            raise PredictionError("dataset schema does not match the fitted model")
        return self.predict_batch(ds.values, threshold)

    def _confidences_from_features(self, F: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class BRModel(MultiLabelModel):
    """Independent binary model per label."""

    kind = "br"

    def __init__(self, schema, threshold, learners: list[TrainedLearner]) -> None:
        super().__init__(schema, threshold)
        self.learners = list(learners)

    def _confidences_from_features(self, F: np.ndarray) -> np.ndarray:
        out = np.empty((F.shape[0], self.k), dtype=np.float64)
        for j, learner in enumerate(self.learners):
            out[:, j] = learner.predict_distribution_batch(F)[:, 1]
        return out


class CCModel(MultiLabelModel):
    """Chain: each link sees the thresholded bits of the earlier links."""

    kind = "cc"

    def __init__(self, schema, threshold, order, learners) -> None:
        super().__init__(schema, threshold)
        self.order = tuple(order)
        self.learners = list(learners)

    def _confidences_from_features(self, F: np.ndarray) -> np.ndarray:
        n = F.shape[0]
        out = np.empty((n, self.k), dtype=np.float64)
        extended = F
        for t, label_j in enumerate(self.order):
            conf = self.learners[t].predict_distribution_batch(extended)[:, 1]
            out[:, label_j] = conf
            bits = (conf >= self.threshold).astype(np.float64).reshape(-1, 1)
            extended = np.hstack([extended, bits])
        return out


@dataclass(frozen=True)
class DependencyTree:
    """Maximum-dependence spanning tree over the labels, rooted at label 0."""

    n_labels: int
    edges: tuple[tuple[int, int, float], ...]
    root: int
    parent: tuple[int, ...]  # -1 for the root
    order: tuple[int, ...]  # breadth-first from the root


def _binary_entropy_and_mi(a: np.ndarray, b: np.ndarray) -> tuple[float, float, float]:
    n = a.shape[0]
    joint = np.zeros((2, 2), dtype=np.float64)
    for va in (0, 1):
        for vb in (0, 1):
            joint[va, vb] = np.count_nonzero((a == va) & (b == vb))
    joint /= n
    pa, pb = joint.sum(axis=1), joint.sum(axis=0)

    def ent(p):
        nz = p[p > 0]
        return float(-(nz * np.log(nz)).sum())

    mi = 0.0
    for va in (0, 1):
        for vb in (0, 1):
            pj = joint[va, vb]
            if pj > 0:
                mi += pj * math.log(pj / (pa[va] * pb[vb]))
    return ent(pa), ent(pb), mi


def label_dependence(a: np.ndarray, b: np.ndarray) -> float:
    """Normalized mutual information of two binary label columns, in [0, 1].

    Degenerate (constant) columns carry no usable dependence and score 0.
    """
    ha, hb, mi = _binary_entropy_and_mi(a, b)
    if ha + hb <= 0:
        return 0.0
    return max(0.0, min(1.0, 2.0 * mi / (ha + hb)))


def build_dependency_tree(ds: MultiLabelDataset) -> DependencyTree:
    """Maximum spanning tree over pairwise label dependence, root label 0.

    Ties between equal-weight edges resolve toward the lexicographically
    smallest (a, b) pair.
    """
    k = ds.k
    if k < 2:
        raise StructureError("a dependency tree needs at least two labels")
    labels = ds.label_matrix()
    candidates = []
    for a in range(k):
        for b in range(a + 1, k):
            w = float(label_dependence(labels[:, a], labels[:, b]))
            candidates.append((a, b, w))
    candidates.sort(key=lambda e: (-e[2], e[0], e[1]))

    parent_uf = list(range(k))

    def find(x):
        while parent_uf[x] != x:
            parent_uf[x] = parent_uf[parent_uf[x]]
            x = parent_uf[x]
        return x

    edges = []
    for a, b, w in candidates:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent_uf[ra] = rb
            edges.append((a, b, w))
        if len(edges) == k - 1:
            break

    adjacency: dict[int, list[int]] = {j: [] for j in range(k)}
    for a, b, _ in edges:
        adjacency[a].append(b)
        adjacency[b].append(a)
    root = 0
    parent = [-1] * k
    order = [root]
    seen = {root}
    queue = [root]
    while queue:
        node = queue.pop(0)
        for nxt in sorted(adjacency[node]):
            if nxt not in seen:
                seen.add(nxt)
                parent[nxt] = node
                order.append(nxt)
                queue.append(nxt)
    return DependencyTree(k, tuple(edges), root, tuple(parent), tuple(order))


class BCCModel(MultiLabelModel):
    """Tree-structured chain: each label conditions only on its parent."""

    kind = "bcc"

    def __init__(self, schema, threshold, tree, order, learners) -> None:
        super().__init__(schema, threshold)
        self.tree = tree  # None when k == 1
        self.order = tuple(order)
        self.learners = list(learners)

    def _confidences_from_features(self, F: np.ndarray) -> np.ndarray:
        n = F.shape[0]
        out = np.empty((n, self.k), dtype=np.float64)
        bits = np.empty((n, self.k), dtype=np.float64)
        for t, label_j in enumerate(self.order):
            parent = -1 if self.tree is None else self.tree.parent[label_j]
            if parent < 0:
                inputs = F
            else:
                inputs = np.hstack([F, bits[:, parent].reshape(-1, 1)])
            conf = self.learners[t].predict_distribution_batch(inputs)[:, 1]
            out[:, label_j] = conf
            bits[:, label_j] = (conf >= self.threshold).astype(np.float64)
        return out


class LPModel(MultiLabelModel):
    """Labelset-powerset reduction: one multiclass model over the distinct
    label subsets observed in training."""

    kind = "lp"

    def __init__(self, schema, threshold, learner, labelsets: tuple[str, ...]) -> None:
        super().__init__(schema, threshold)
        self.learner = learner
        self.labelsets = tuple(labelsets)  # bitstrings, one per class
        self._membership = np.array(
            [[bit == "1" for bit in s] for s in labelsets], dtype=np.float64
        )

    def _confidences_from_features(self, F: np.ndarray) -> np.ndarray:
        probs = self.learner.predict_distribution_batch(F)
        return probs @ self._membership

    def predict_batch(self, rows, threshold=None):
        rows = self._check_rows(rows)
        feats = list(self.schema.feature_indices)
        F = rows[:, feats]
        probs = self.learner.predict_distribution_batch(F)
        conf = probs @ self._membership
        out = []
        for i in range(rows.shape[0]):
            winner = self.labelsets[int(np.argmax(probs[i]))]
            bipartition = frozenset(j for j, bit in enumerate(winner) if bit == "1")
            out.append(
                MultiLabelPrediction(
                    tuple(float(c) for c in conf[i]),
                    bipartition,
                    _ranking_from_confidences(conf[i]),
                )
            )
        return out


def train_br(
    ds: MultiLabelDataset,
    spec: LearnerSpec,
    seed: int = 1,
    threshold: float = DEFAULT_THRESHOLD,
) -> BRModel:
    """Fit one independent learner per label."""
    _require_rows(ds)
    learners = []
    for j, view in enumerate(br_transform(ds)):
        learners.append(_train_labeled(view, spec, seed, ds.schema.label_names[j]))
    return BRModel(ds.schema, threshold, learners)


def train_cc(
    ds: MultiLabelDataset,
    spec: LearnerSpec,
    order: tuple[int, ...] | None = None,
    seed: int = 1,
    threshold: float = DEFAULT_THRESHOLD,
) -> CCModel:
    """Fit a classifier chain. Training feeds each link the true bits of
    the earlier labels; prediction feeds the thresholded predicted bits."""
    _require_rows(ds)
    k = ds.k
    if order is None:
        order = tuple(range(k))
    else:
        order = tuple(int(j) for j in order)
        if sorted(order) != list(range(k)):
            raise TrainingError(f"chain order {order} is not a permutation of 0..{k - 1}")
    learners = []
    for t, label_j in enumerate(order):
        view = _chained_view(ds, label_j, list(order[:t]))
        learners.append(_train_labeled(view, spec, seed, ds.schema.label_names[label_j]))
    return CCModel(ds.schema, threshold, order, learners)


def train_bcc(
    ds: MultiLabelDataset,
    spec: LearnerSpec,
    seed: int = 1,
    threshold: float = DEFAULT_THRESHOLD,
) -> BCCModel:
    """Fit a chain along the label dependency tree: every label sees only
    its parent's bit. With a single label this is plain BR."""
    _require_rows(ds)
    if ds.k == 1:
        view = _chained_view(ds, 0, [])
        learner = _train_labeled(view, spec, seed, ds.schema.label_names[0])
        return BCCModel(ds.schema, threshold, None, (0,), [learner])
    tree = build_dependency_tree(ds)
    learners = []
    for label_j in tree.order:
        parent = tree.parent[label_j]
        given = [] if parent < 0 else [parent]
        view = _chained_view(ds, label_j, given)
        learners.append(_train_labeled(view, spec, seed, ds.schema.label_names[label_j]))
    return BCCModel(ds.schema, threshold, tree, tree.order, learners)


def train_lp(
    ds: MultiLabelDataset,
    spec: LearnerSpec,
    seed: int = 1,
    threshold: float = DEFAULT_THRESHOLD,
) -> LPModel:
    """Fit the labelset-powerset reduction: each distinct observed labelset
    becomes one class of a single multiclass problem."""
    _require_rows(ds)
    labels = ds.label_matrix()
    bitstrings = ["".join("1" if b else "0" for b in row) for row in labels]
    classes = tuple(sorted(set(bitstrings)))
    class_index = {s: i for i, s in enumerate(classes)}
    y = np.array([class_index[s] for s in bitstrings], dtype=np.int64)

    feats = list(ds.schema.feature_indices)
    X = ds.values[:, feats]
    names = tuple(ds.schema.attributes[j].name for j in feats)
    cats = tuple(ds.schema.attributes[j].categories for j in feats)
    view = SingleLabelView(X, y, names, cats, classes)
    learner = train(view, spec, seed=seed)
    return LPModel(ds.schema, threshold, learner, classes)


def _require_rows(ds: MultiLabelDataset) -> None:
    if ds.n_instances == 0:
        raise TrainingError("cannot train on an empty dataset")
    if ds.k < 1:
        raise TrainingError("dataset has no label columns")


def _train_labeled(view, spec, seed, label_name):
    try:
        return train(view, spec, seed=seed)
    except Exception as exc:
        raise TrainingError(f"label {label_name!r}: {exc}") from exc
