import random

import numpy as np
import pytest

from mll.errors import EvaluationError
from mll.metrics import (
    EvalPair,
    build_eval_pair,
    compute_report,
    exact_match,
    example_based,
    f1_micro,
    hamming,
    harmonic_score,
    per_label_accuracy,
    ranking_metrics,
)
from mll.multilabel import MultiLabelPrediction

from oracle import brute_report


def _pair(true_sets, pred_sets, rankings, k):
    return EvalPair(
        tuple(frozenset(s) for s in true_sets),
        tuple(frozenset(s) for s in pred_sets),
        tuple(tuple(r) for r in rankings),
        k,
    )


def random_pair(rng: random.Random, k_max=8, n_max=50) -> EvalPair:
    k = rng.randint(1, k_max)
    n = rng.randint(1, n_max)
    true_sets, pred_sets, rankings = [], [], []
    for _ in range(n):
        true_sets.append({j for j in range(k) if rng.random() < 0.4})
        pred_sets.append({j for j in range(k) if rng.random() < 0.4})
        perm = list(range(1, k + 1))
        rng.shuffle(perm)
        rankings.append(tuple(perm))
    return _pair(true_sets, pred_sets, rankings, k)


def assert_matches_oracle(pair: EvalPair, tol=1e-12):
    try:
        report = compute_report(pair)
    except EvaluationError:
        # defined only when the oracle also finds the metric undefined
        with pytest.raises(ZeroDivisionError):
            brute_report(pair.true_sets, pair.pred_sets, pair.rankings, pair.k)
        return
    expected = brute_report(pair.true_sets, pair.pred_sets, pair.rankings, pair.k)
    got = report.as_dict()
    for name, value in expected.items():
        if name == "per_label_accuracy":
            assert np.allclose(got[name], value, atol=tol, rtol=0)
        else:
            assert abs(got[name] - value) <= tol, name


class TestWorkedExample:
    # Y={1,3}, Z={1,2}, k=4: one instance, all set arithmetic by hand.
    pair = _pair([{1, 3}], [{1, 2}], [(4, 1, 2, 3)], 4)

    def test_example_based(self):
        values = example_based(self.pair)
        assert values["precision"] == 0.5
        assert values["recall"] == 0.5
        assert values["accuracy"] == pytest.approx(1 / 3, abs=1e-15)
        assert values["f1_example"] == 0.5

    def test_hamming(self):
        values = hamming(self.pair)
        assert values["hamming_loss"] == 0.5
        assert values["hamming_score"] == 0.5

    def test_micro(self):
        assert f1_micro(self.pair) == 0.5

    def test_agrees_with_oracle(self):
        assert_matches_oracle(self.pair)


class TestExactMatch:
    def test_identity(self):
        pair = _pair([{0, 2}, {1}], [{0, 2}, {1}], [(1, 2, 3)] * 2, 3)
        assert exact_match(pair)["exact_match"] == 1.0

    def test_half(self):
        pair = _pair([{0}, {1, 2}], [{0}, {1}], [(1, 2, 3)] * 2, 3)
        values = exact_match(pair)
        assert values["exact_match"] == 0.5
        assert values["zero_one_loss"] == 0.5


class TestExampleBasedEdges:
    def test_equal_nonempty_sets(self):
        pair = _pair([{0, 1}], [{0, 1}], [(1, 2)], 2)
        assert all(v == 1.0 for v in example_based(pair).values())

    def test_empty_prediction(self):
        pair = _pair([{1}], [set()], [(1, 2)], 2)
        values = example_based(pair)
        assert values == {"precision": 0.0, "recall": 0.0, "accuracy": 0.0, "f1_example": 0.0}

    def test_both_empty_counts_perfect(self):
        pair = _pair([set()], [set()], [(1, 2)], 2)
        assert all(v == 1.0 for v in example_based(pair).values())


class TestRankingMetrics:
    def test_hand_example(self):
        # k=3, Y={label0}; ranking puts label1 first, label0 second.
        pair = _pair([{0}], [{1}], [(2, 1, 3)], 3)
        values = ranking_metrics(pair)
        assert values["one_error"] == 1.0
        assert values["ranking_loss"] == 0.5
        assert values["coverage"] == 1.0

    def test_perfect_ranking(self):
        pair = _pair([{0, 1}], [{0, 1}], [(1, 2, 3)], 3)
        values = ranking_metrics(pair)
        assert values["one_error"] == 0.0
        assert values["ranking_loss"] == 0.0

    def test_all_degenerate_is_an_error(self):
        pair = _pair([set(), {0, 1}], [{0}, {0}], [(1, 2), (2, 1)], 2)
        with pytest.raises(EvaluationError):
            ranking_metrics(pair)


class TestPerLabelAccuracy:
    def test_perfect(self):
        pair = _pair([{0}, {1}], [{0}, {1}], [(1, 2)] * 2, 2)
        assert per_label_accuracy(pair) == (1.0, 1.0)

    def test_complement(self):
        pair = _pair([{0}, {1}], [{1}, {0}], [(1, 2)] * 2, 2)
        assert per_label_accuracy(pair) == (0.0, 0.0)


class TestHarmonicScore:
    def test_perfect(self):
        pair = _pair([{0}, set()], [{0}, set()], [(1,), (1,)], 1)
        assert harmonic_score(pair) == 1.0

    def test_all_positive_prediction_zeroes_a_label(self):
        pair = _pair([{0}, set()], [{0}, {0}], [(1,), (1,)], 1)
        assert harmonic_score(pair) == 0.0


class TestValidation:
    def test_empty_pairs_rejected(self):
        with pytest.raises(EvaluationError):
            _pair([], [], [], 2)

    def test_bad_ranking_rejected(self):
        with pytest.raises(EvaluationError):
            _pair([{0}], [{0}], [(1, 1)], 2)

    def test_out_of_range_label_rejected(self):
        with pytest.raises(EvaluationError):
            _pair([{5}], [{0}], [(1, 2)], 2)


class TestOracleEquivalence:
    def test_thousand_random_pairs(self):
        rng = random.Random(20240817)
        for _ in range(1000):
            assert_matches_oracle(random_pair(rng))

    def test_identities_exact(self):
        rng = random.Random(7)
        for _ in range(200):
            pair = random_pair(rng)
            report_em = exact_match(pair)
            assert report_em["zero_one_loss"] + report_em["exact_match"] == 1.0
            report_h = hamming(pair)
            assert report_h["hamming_score"] + report_h["hamming_loss"] == 1.0


class TestMonotonicity:
    def test_flipping_a_correct_bit(self):
        rng = random.Random(99)
        for _ in range(100):
            pair = random_pair(rng)
            i = rng.randrange(pair.n)
            y, z = pair.true_sets[i], pair.pred_sets[i]
            correct_bits = [j for j in range(pair.k) if (j in y) == (j in z)]
            if not correct_bits:
                continue
            j = rng.choice(correct_bits)
            flipped = set(z)
            flipped.symmetric_difference_update({j})
            new_preds = list(pair.pred_sets)
            new_preds[i] = frozenset(flipped)
            worse = EvalPair(pair.true_sets, tuple(new_preds), pair.rankings, pair.k)
            assert hamming(worse)["hamming_loss"] >= hamming(pair)["hamming_loss"]
            assert exact_match(worse)["exact_match"] <= exact_match(pair)["exact_match"]


class TestBounds:
    def test_random_inputs_in_bounds(self):
        rng = random.Random(3)
        for _ in range(200):
            pair = random_pair(rng)
            try:
                report = compute_report(pair)
            except EvaluationError:
                continue
            for name in report.SCALAR_FIELDS:
                value = getattr(report, name)
                if name == "coverage":
                    assert 0.0 <= value <= pair.k - 1
                else:
                    assert 0.0 <= value <= 1.0, name
            assert all(0.0 <= v <= 1.0 for v in report.per_label_accuracy)


class TestSingleLabel:
    def test_k1_collapse(self):
        rng = random.Random(11)
        for _ in range(50):
            n = rng.randint(1, 30)
            Y = [{0} if rng.random() < 0.5 else set() for _ in range(n)]
            Z = [{0} if rng.random() < 0.5 else set() for _ in range(n)]
            pair = _pair(Y, Z, [(1,)] * n, 1)
            acc = per_label_accuracy(pair)[0]
            assert acc == exact_match(pair)["exact_match"]
            assert acc == pytest.approx(1.0 - hamming(pair)["hamming_loss"], abs=1e-15)


class TestBuildEvalPair:
    def test_from_predictions(self):
        truth = np.array([[1, 0, 1], [0, 1, 0]])
        preds = [
            MultiLabelPrediction((0.9, 0.1, 0.6), frozenset({0, 2}), (1, 3, 2)),
            MultiLabelPrediction((0.2, 0.8, 0.1), frozenset({1}), (2, 1, 3)),
        ]
        pair = build_eval_pair(truth, preds)
        assert pair.true_sets == (frozenset({0, 2}), frozenset({1}))
        assert pair.pred_sets == (frozenset({0, 2}), frozenset({1}))
        assert compute_report(pair).exact_match == 1.0
