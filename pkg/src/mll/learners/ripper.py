"""Propositional rule induction with reduced-error pruning.

Classes are handled from rarest to most frequent. For each class the
remaining data is repeatedly split into a growing set and a pruning set;
a rule is grown condition by condition to maximize FOIL gain, pruned back
to maximize (p - n) / (p + n) on the pruning set, and accepted until either
the description length of the rule list drifts too far above the best seen
or the pruned rule is no better than chance. Accepted rules then go through
optimization passes that compare each rule against a freshly grown
replacement and a revision, keeping whichever yields the shortest
description. Prediction walks the ordered rule list and answers with the
add-one-smoothed class counts of the first matching rule.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import TrainingError
from .base import SingleLabelView, TrainedLearner
from .specs import RipperSpec

NEG_INF = float("-inf")
MDL_STOP_BITS = 64.0
THEORY_REDUNDANCY = 0.5


def foil_gain(p0: int, n0: int, p1: int, n1: int) -> float:
    """Gain of narrowing rule coverage from (p0 pos, n0 neg) to (p1, n1).

    Returns -inf when the narrowed rule covers no positives, so such
    conditions are never selected.
    """
    if min(p0, n0, p1, n1) < 0:
        raise ValueError("coverage counts must be nonnegative")
    if p0 + n0 < 1:
        raise ValueError("the starting coverage must be nonempty")
    if p1 == 0:
        return NEG_INF
    if p0 == 0:
        return NEG_INF
    return p1 * (math.log2(p1 / (p1 + n1)) - math.log2(p0 / (p0 + n0)))


def prune_value(p: int, n: int) -> float:
    """Worth of a rule on the pruning set; -inf when it covers nothing."""
    if p + n == 0:
        return NEG_INF
    return (p - n) / (p + n)


@dataclass(frozen=True)
class Condition:
    col: int
    op: str  # "==", "<=", ">="
    value: float

    def holds(self, X: np.ndarray) -> np.ndarray:
        col = X[:, self.col]
        if self.op == "==":
            return col == self.value
        if self.op == "<=":
            return col <= self.value  # NaN compares False: missing is never covered
        return col >= self.value

    def describe(self, feature_names, feature_categories) -> str:
        name = feature_names[self.col]
        cats = feature_categories[self.col]
        if self.op == "==" and cats is not None:
            return f"{name} = {cats[int(self.value)]}"
        return f"{name} {self.op} {self.value:g}"


@dataclass(frozen=True)
class Rule:
    conditions: tuple[Condition, ...]
    target: int

    def covers(self, X: np.ndarray) -> np.ndarray:
        mask = np.ones(X.shape[0], dtype=bool)
        for cond in self.conditions:
            mask &= cond.holds(X)
        return mask


class RipperModel(TrainedLearner):
    kind = "ripper"

    def __init__(self, class_names, n_features, rules, rule_counts, default_class,
                 default_counts, feature_names, feature_categories) -> None:
        super().__init__(class_names, n_features)
        self.rules = tuple(rules)
        self.rule_counts = [np.asarray(c, dtype=np.float64) for c in rule_counts]
        self.default_class = int(default_class)
        self.default_counts = np.asarray(default_counts, dtype=np.float64)
        self.feature_names = tuple(feature_names)
        self.feature_categories = tuple(feature_categories)

    def _distribution(self, row: np.ndarray) -> np.ndarray:
        X = row.reshape(1, -1)
        for rule, counts in zip(self.rules, self.rule_counts):
            if bool(rule.covers(X)[0]):
                return _laplace(counts)
        return _laplace(self.default_counts)

    def describe(self) -> str:
        lines = []
        for rule in self.rules:
            if rule.conditions:
                body = " and ".join(
                    c.describe(self.feature_names, self.feature_categories)
                    for c in rule.conditions
                )
            else:
                body = "true"
            lines.append(f"if {body} then {self.class_names[rule.target]}")
        lines.append(f"else {self.class_names[self.default_class]}")
        return "\n".join(lines)


def _laplace(counts: np.ndarray) -> np.ndarray:
    return (counts + 1.0) / (counts.sum() + counts.shape[0])


def _lg_binomial(n: float, k: float) -> float:
    if k < 0 or k > n:
        return 0.0
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / math.log(2.0)


def _data_dl(cov: int, fp: int, uncov: int, fn: int) -> float:
    bits = math.log2(cov + 1) + _lg_binomial(cov, fp)
    bits += math.log2(uncov + 1) + _lg_binomial(uncov, fn)
    return bits


def _theory_dl(n_conditions: int, n_possible: int) -> float:
    if n_conditions == 0:
        return 0.0
    per_condition = max(math.log2(max(n_possible, 2)), 1.0)
    return THEORY_REDUNDANCY * (math.log2(n_conditions + 1) + n_conditions * per_condition)


def _count_possible_conditions(X: np.ndarray, feature_categories) -> int:
    total = 0
    for j, cats in enumerate(feature_categories):
        col = X[:, j]
        observed = col[~np.isnan(col)]
        if cats is not None:
            total += int(np.unique(observed).size)
        else:
            total += 2 * int(np.unique(observed).size)
    return max(total, 1)


def _ruleset_dl(rules, X: np.ndarray, pos: np.ndarray, n_possible: int) -> float:
    covered = np.zeros(X.shape[0], dtype=bool)
    bits = 0.0
    for rule in rules:
        covered |= rule.covers(X)
        bits += _theory_dl(len(rule.conditions), n_possible)
    fp = int((covered & ~pos).sum())
    fn = int((~covered & pos).sum())
    bits += _data_dl(int(covered.sum()), fp, int((~covered).sum()), fn)
    return bits


def _best_condition(X, cov, pos, feature_categories, min_coverage):
    """Highest-FOIL-gain condition over the currently covered rows, or None.

    Ties resolve to the earliest candidate: lowest column, then == before
    <= before >=, then lowest value.
    """
    covered_pos = int((cov & pos).sum())
    covered_neg = int((cov & ~pos).sum())
    if covered_pos == 0 or covered_neg == 0:
        return None
    base = math.log2(covered_pos / (covered_pos + covered_neg))

    best_gain = 0.0
    best = None
    for j, cats in enumerate(feature_categories):
        col = X[:, j]
        observed = cov & ~np.isnan(col)
        if not observed.any():
            continue
        vals = col[observed]
        pos_here = pos[observed]
        if cats is not None:
            V = len(cats)
            idx = vals.astype(np.int64)
            totals = np.bincount(idx, minlength=V).astype(np.float64)
            p1s = np.bincount(idx[pos_here], minlength=V).astype(np.float64)
            with np.errstate(divide="ignore", invalid="ignore"):
                gains = p1s * (np.log2(p1s / totals) - base)
            gains = np.where((p1s >= min_coverage) & (totals > 0), gains, NEG_INF)
            v = int(np.argmax(gains))
            if gains[v] > best_gain:
                best_gain = float(gains[v])
                best = Condition(j, "==", float(v))
        else:
            order = np.argsort(vals, kind="stable")
            v_sorted = vals[order]
            p_sorted = pos_here[order].astype(np.float64)
            uniq, starts, counts = np.unique(v_sorted, return_index=True, return_counts=True)
            pos_per_value = np.add.reduceat(p_sorted, starts)
            totals_le = np.cumsum(counts).astype(np.float64)
            pos_le = np.cumsum(pos_per_value)
            n_obs = totals_le[-1]
            n_pos = pos_le[-1]
            totals_ge = n_obs - np.concatenate([[0.0], totals_le[:-1]])
            pos_ge = n_pos - np.concatenate([[0.0], pos_le[:-1]])
            for op, p1s, totals in (("<=", pos_le, totals_le), (">=", pos_ge, totals_ge)):
                with np.errstate(divide="ignore", invalid="ignore"):
                    gains = p1s * (np.log2(p1s / totals) - base)
                gains = np.where(p1s >= min_coverage, gains, NEG_INF)
                v = int(np.argmax(gains))
                if gains[v] > best_gain:
                    best_gain = float(gains[v])
                    best = Condition(j, op, float(uniq[v]))
    return best


def _grow_rule(X, grow_mask, pos, feature_categories, min_coverage, target,
               start: tuple[Condition, ...] = ()) -> Rule | None:
    """Greedily add FOIL-gain-maximizing conditions until no negatives are
    covered or no condition improves."""
    conditions = list(start)
    cov = grow_mask.copy()
    for cond in conditions:
        cov &= cond.holds(X)
    grew = False
    while True:
        if not (cov & ~pos).any():
            break
        cond = _best_condition(X, cov, pos, feature_categories, min_coverage)
        if cond is None:
            break
        conditions.append(cond)
        cov &= cond.holds(X)
        grew = True
    if not conditions or (not grew and not start):
        return None
    if not (cov & pos).sum() >= min_coverage:
        return None
    return Rule(tuple(conditions), target)


def _prune_rule(rule: Rule, X, prune_mask, pos) -> tuple[Rule, int, int]:
    """Drop a final sequence of conditions to maximize the prune-set worth.

    At least one condition is kept. Returns the pruned rule and its
    positive/negative coverage on the pruning set.
    """
    cov = prune_mask.copy()
    coverages = []
    for cond in rule.conditions:
        cov = cov & cond.holds(X)
        coverages.append((int((cov & pos).sum()), int((cov & ~pos).sum())))
    best_len = len(rule.conditions)
    best_value = prune_value(*coverages[-1])
    for length in range(1, len(rule.conditions)):
        value = prune_value(*coverages[length - 1])
        if value > best_value or (value == best_value and length < best_len):
            best_value = value
            best_len = length
    pruned = Rule(rule.conditions[:best_len], rule.target)
    p, n = coverages[best_len - 1]
    return pruned, p, n


def _grow_prune_split(rng, pos_idx, neg_idx, n, folds):
    """Stratified shuffle split: the last ~1/folds of each class goes to
    the pruning set."""
    grow = np.zeros(n, dtype=bool)
    prune = np.zeros(n, dtype=bool)
    for idx in (pos_idx, neg_idx):
        shuffled = idx.copy()
        rng.shuffle(shuffled)
        n_prune = len(shuffled) // folds
        grow[shuffled[: len(shuffled) - n_prune]] = True
        prune[shuffled[len(shuffled) - n_prune:]] = True
    return grow, prune


def train_ripper(view: SingleLabelView, spec: RipperSpec | None = None, seed: int = 1) -> RipperModel:
    if view.n == 0:
        raise TrainingError("cannot fit rules on an empty view")
    spec = spec or RipperSpec()
    rng = np.random.default_rng(seed)
    X, y = view.X, view.y
    C = view.n_classes
    class_counts = np.bincount(y, minlength=C)
    order = sorted(range(C), key=lambda c: (class_counts[c], c))

    rules: list[Rule] = []
    remaining = np.ones(view.n, dtype=bool)
    for cls in order[:-1]:
        if class_counts[cls] == 0:
            continue
        if class_counts[cls] < 3:
            warnings.warn(
                f"class {view.class_names[cls]!r} has {class_counts[cls]} instances; "
                "it is handled by the default rule only",
                stacklevel=2,
            )
            continue
        class_rules = _learn_class_rules(X, y, remaining, cls, view.feature_categories, spec, rng)
        for rule in class_rules:
            remaining &= ~rule.covers(X)
        rules.extend(class_rules)

    uncovered = np.flatnonzero(remaining)
    if uncovered.size:
        default_class = int(np.argmax(np.bincount(y[uncovered], minlength=C)))
    else:
        default_class = int(np.argmax(class_counts))

    # First-match coverage counts over the full training data drive the
    # predicted distributions.
    rule_counts = [np.zeros(C, dtype=np.float64) for _ in rules]
    default_counts = np.zeros(C, dtype=np.float64)
    unclaimed = np.ones(view.n, dtype=bool)
    for rule, counts in zip(rules, rule_counts):
        mine = rule.covers(X) & unclaimed
        if mine.any():
            counts += np.bincount(y[mine], minlength=C)
        unclaimed &= ~mine
    if unclaimed.any():
        default_counts += np.bincount(y[unclaimed], minlength=C)

    return RipperModel(
        view.class_names, view.n_features, rules, rule_counts, default_class,
        default_counts, view.feature_names, view.feature_categories,
    )


def _learn_class_rules(X, y, remaining, cls, feature_categories, spec, rng) -> list[Rule]:
    run_mask = remaining.copy()
    run_pos = run_mask & (y == cls)
    n_possible = _count_possible_conditions(X[run_mask], feature_categories)

    active = run_mask.copy()
    class_rules: list[Rule] = []
    dl_min = _ruleset_dl([], X[run_mask], run_pos[run_mask], n_possible)

    while (active & (y == cls)).any():
        pos_idx = np.flatnonzero(active & (y == cls))
        neg_idx = np.flatnonzero(active & (y != cls))
        grow_mask, prune_mask = _grow_prune_split(
            rng, pos_idx, neg_idx, X.shape[0], spec.folds_for_prune
        )
        rule = _grow_rule(
            X, grow_mask, y == cls, feature_categories, spec.min_coverage, cls
        )
        if rule is None:
            break
        if prune_mask.any():
            rule, p, n = _prune_rule(rule, X, prune_mask, y == cls)
            error = n / (p + n) if (p + n) > 0 else 1.0
            if error > 0.5:
                break
        candidate = class_rules + [rule]
        dl = _ruleset_dl(candidate, X[run_mask], run_pos[run_mask], n_possible)
        if dl > dl_min + MDL_STOP_BITS:
            break
        dl_min = min(dl_min, dl)
        class_rules.append(rule)
        active &= ~rule.covers(X)

    for _ in range(spec.optimization_passes):
        class_rules = _optimize_rules(
            X, y, run_mask, run_pos, cls, class_rules, feature_categories,
            spec, rng, n_possible,
        )
    return class_rules


def _optimize_rules(X, y, run_mask, run_pos, cls, class_rules, feature_categories,
                    spec, rng, n_possible) -> list[Rule]:
    pos_all = y == cls
    for i, original in enumerate(class_rules):
        others_cov = np.zeros(X.shape[0], dtype=bool)
        for j, other in enumerate(class_rules):
            if j != i:
                others_cov |= other.covers(X)
        scope = run_mask & ~others_cov
        pos_idx = np.flatnonzero(scope & pos_all)
        neg_idx = np.flatnonzero(scope & ~pos_all)
        if pos_idx.size == 0:
            continue
        grow_mask, prune_mask = _grow_prune_split(
            rng, pos_idx, neg_idx, X.shape[0], spec.folds_for_prune
        )

        candidates = [original]
        replacement = _grow_rule(
            X, grow_mask, pos_all, feature_categories, spec.min_coverage, cls
        )
        if replacement is not None and prune_mask.any():
            replacement, _, _ = _prune_rule(replacement, X, prune_mask, pos_all)
        if replacement is not None:
            candidates.append(replacement)
        revision = _grow_rule(
            X, grow_mask, pos_all, feature_categories, spec.min_coverage, cls,
            start=original.conditions,
        )
        if revision is not None and prune_mask.any():
            revision, _, _ = _prune_rule(revision, X, prune_mask, pos_all)
        if revision is not None:
            candidates.append(revision)

        best_dl, best = None, original
        for cand in candidates:
            variant = class_rules[:i] + [cand] + class_rules[i + 1:]
            dl = _ruleset_dl(variant, X[run_mask], run_pos[run_mask], n_possible)
            if best_dl is None or dl < best_dl:
                best_dl, best = dl, cand
        class_rules[i] = best
    return class_rules
