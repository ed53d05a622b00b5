"""Evaluation measures for multi-label predictions.

Y is the true label set, Z the predicted set, and r the per-instance
ranking permutation (rank 1 = most confident). Example-based ratios with an
empty denominator count as perfect when both sets are empty and as zero
when only one is. Instances where ranking loss is undefined (no relevant or
no irrelevant labels) are skipped and the average renormalized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EvaluationError
from .multilabel import MultiLabelPrediction


@dataclass(frozen=True)
class EvalPair:
    """Aligned true sets, predicted sets, and rankings for n instances."""

    true_sets: tuple[frozenset[int], ...]
    pred_sets: tuple[frozenset[int], ...]
    rankings: tuple[tuple[int, ...], ...]
    k: int

    def __post_init__(self) -> None:
        n = len(self.true_sets)
        if n < 1:
            raise EvaluationError("cannot evaluate zero instances")
        if len(self.pred_sets) != n or len(self.rankings) != n:
            raise EvaluationError("true sets, predictions, and rankings must align")
        universe = set(range(self.k))
        for y, z, r in zip(self.true_sets, self.pred_sets, self.rankings):
            if not (y <= universe and z <= universe):
                raise EvaluationError("label outside 0..k-1")
            if sorted(r) != list(range(1, self.k + 1)):
                raise EvaluationError(f"ranking {r} is not a permutation of 1..{self.k}")

    @property
    def n(self) -> int:
        return len(self.true_sets)


def build_eval_pair(
    truth: np.ndarray, predictions: Sequence[MultiLabelPrediction]
) -> EvalPair:
    """Pair an (n, k) 0/1 truth matrix with model predictions."""
    truth = np.asarray(truth)
    k = truth.shape[1]
    true_sets = tuple(frozenset(int(j) for j in np.flatnonzero(row)) for row in truth)
    pred_sets = tuple(p.bipartition for p in predictions)
    rankings = tuple(p.ranking for p in predictions)
    return EvalPair(true_sets, pred_sets, rankings, k)


@dataclass(frozen=True)
class MetricReport:
    """Every measure for one evaluation run."""

    exact_match: float
    zero_one_loss: float
    precision: float
    recall: float
    accuracy: float
    f1_example: float
    hamming_loss: float
    hamming_score: float
    one_error: float
    ranking_loss: float
    coverage: float
    f1_micro: float
    harmonic_score: float
    per_label_accuracy: tuple[float, ...]

    SCALAR_FIELDS = (
        "exact_match", "zero_one_loss", "precision", "recall", "accuracy",
        "f1_example", "hamming_loss", "hamming_score", "one_error",
        "ranking_loss", "coverage", "f1_micro", "harmonic_score",
    )

    def as_dict(self) -> dict[str, float | list[float]]:
        out: dict = {name: getattr(self, name) for name in self.SCALAR_FIELDS}
        out["per_label_accuracy"] = list(self.per_label_accuracy)
        return out


def exact_match(pairs: EvalPair) -> dict[str, float]:
    """Fraction of instances predicted exactly; its complement is the
    zero-one loss."""
    hits = sum(1 for y, z in zip(pairs.true_sets, pairs.pred_sets) if y == z)
    ratio = hits / pairs.n
    return {"exact_match": ratio, "zero_one_loss": 1.0 - ratio}


def example_based(pairs: EvalPair) -> dict[str, float]:
    """Instance-averaged precision, recall, set accuracy, and F1."""
    p_sum = r_sum = a_sum = f_sum = 0.0
    for y, z in zip(pairs.true_sets, pairs.pred_sets):
        inter = len(y & z)
        p_sum += _ratio(inter, len(z), both_empty=(not y and not z))
        r_sum += _ratio(inter, len(y), both_empty=(not y and not z))
        a_sum += _ratio(inter, len(y | z), both_empty=(not y and not z))
        f_sum += _ratio(2 * inter, len(y) + len(z), both_empty=(not y and not z))
    n = pairs.n
    return {
        "precision": p_sum / n,
        "recall": r_sum / n,
        "accuracy": a_sum / n,
        "f1_example": f_sum / n,
    }


def _ratio(num: float, den: float, both_empty: bool) -> float:
    if den == 0:
        return 1.0 if both_empty else 0.0
    return num / den


def hamming(pairs: EvalPair) -> dict[str, float]:
    """Average per-label disagreement; the score is its complement."""
    total = sum(len(y ^ z) for y, z in zip(pairs.true_sets, pairs.pred_sets))
    loss = total / (pairs.n * pairs.k)
    return {"hamming_loss": loss, "hamming_score": 1.0 - loss}


def ranking_metrics(pairs: EvalPair) -> dict[str, float]:
    """One-error, ranking loss, and coverage from the rankings.

    Ranking loss skips instances whose relevant set is empty or full;
    coverage skips instances with no relevant labels. If every instance is
    skipped the metric is undefined and an error is raised.
    """
    k = pairs.k
    one_err = 0
    rl_sum, rl_count = 0.0, 0
    cov_sum, cov_count = 0.0, 0
    for y, _, r in zip(pairs.true_sets, pairs.pred_sets, pairs.rankings):
        top = r.index(1)
        if top not in y:
            one_err += 1
        if y:
            cov_sum += max(r[j] for j in y) - 1
            cov_count += 1
        if 0 < len(y) < k:
            ybar = [j for j in range(k) if j not in y]
            bad = sum(1 for a in y for b in ybar if r[a] > r[b])
            rl_sum += bad / (len(y) * len(ybar))
            rl_count += 1
    if rl_count == 0:
        raise EvaluationError("ranking loss undefined: every instance was skipped")
    if cov_count == 0:
        raise EvaluationError("coverage undefined: every instance was skipped")
    return {
        "one_error": one_err / pairs.n,
        "ranking_loss": rl_sum / rl_count,
        "coverage": cov_sum / cov_count,
    }


def per_label_accuracy(pairs: EvalPair) -> tuple[float, ...]:
    """Entry j: fraction of instances where label j's membership matches."""
    out = []
    for j in range(pairs.k):
        hits = sum(
            1
            for y, z in zip(pairs.true_sets, pairs.pred_sets)
            if (j in y) == (j in z)
        )
        out.append(hits / pairs.n)
    return tuple(out)


def f1_micro(pairs: EvalPair) -> float:
    """F1 over all n*k label decisions pooled together."""
    tp = fp = fn = 0
    for y, z in zip(pairs.true_sets, pairs.pred_sets):
        tp += len(y & z)
        fp += len(z - y)
        fn += len(y - z)
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def harmonic_score(pairs: EvalPair) -> float:
    """Label-averaged harmonic mean of the true-positive and true-negative
    rates; a label with an undefined or zero rate contributes 0."""
    total = 0.0
    for j in range(pairs.k):
        tp = fn = tn = fp = 0
        for y, z in zip(pairs.true_sets, pairs.pred_sets):
            if j in y:
                tp += j in z
                fn += j not in z
            else:
                tn += j not in z
                fp += j in z
        pos, neg = tp + fn, tn + fp
        if pos == 0 or neg == 0:
            continue
        tpr, tnr = tp / pos, tn / neg
        if tpr > 0 and tnr > 0:
            total += 2 * tpr * tnr / (tpr + tnr)
    return total / pairs.k


def compute_report(pairs: EvalPair) -> MetricReport:
    values: dict[str, float] = {}
    values.update(exact_match(pairs))
    values.update(example_based(pairs))
    values.update(hamming(pairs))
    values.update(ranking_metrics(pairs))
    values["f1_micro"] = f1_micro(pairs)
    values["harmonic_score"] = harmonic_score(pairs)
    return MetricReport(per_label_accuracy=per_label_accuracy(pairs), **values)
