import math

import numpy as np
import pytest
from oracles import pairwise_auc

from dptune.measures import (
    ConfusionMatrix,
    PredictionVector,
    auc,
    brier,
    confusion_at_threshold,
    evaluate_predictions,
    logloss,
    threshold_measures,
)


def pv(p, y):
    return PredictionVector(np.asarray(p, dtype=float), np.asarray(y, dtype=int))


class TestConfusion:
    def test_perfect(self):
        c = confusion_at_threshold(pv([0.9, 0.1], [1, 0]))
        assert (c.tp, c.tn, c.fp, c.fn) == (1, 1, 0, 0)

    def test_boundary_half_is_clean(self):
        c = confusion_at_threshold(pv([0.5], [1]))
        assert c.fn == 1 and c.tp == 0

    def test_all_false_alarms(self):
        c = confusion_at_threshold(pv([0.6, 0.6], [0, 0]))
        assert c.fp == 2

    def test_threshold_in_open_interval(self):
        with pytest.raises(ValueError):
            confusion_at_threshold(pv([0.5], [1]), threshold=1.0)

    def test_counts_sum_to_total(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            n = int(rng.integers(1, 40))
            v = pv(rng.random(n), rng.integers(0, 2, n))
            c = confusion_at_threshold(v)
            assert c.total == n


class TestThresholdMeasures:
    def test_perfect_classifier(self):
        values, degenerate = threshold_measures(ConfusionMatrix(tp=5, fp=0, tn=5, fn=0))
        for k in ("precision", "recall", "fmeasure", "gmean", "gmeasure", "balance", "mcc"):
            assert values[k] == 1.0, k
        assert values["fpr"] == 0.0
        assert degenerate == []

    def test_balance_at_origin(self):
        # pd = 0, pf = 0
        values, _ = threshold_measures(ConfusionMatrix(tp=0, fp=0, tn=5, fn=5))
        assert values["balance"] == pytest.approx(1.0 - math.sqrt(0.5), abs=1e-12)
        assert values["balance"] == pytest.approx(0.29289, abs=1e-5)

    def test_mixed_case_against_definitions(self):
        c = ConfusionMatrix(tp=3, fp=1, tn=5, fn=1)
        values, _ = threshold_measures(c)
        assert values["precision"] == 0.75
        assert values["recall"] == 0.75
        assert values["fmeasure"] == 0.75
        # brute-force MCC from the printed formula
        num = 3 * 5 - 1 * 1
        den = math.sqrt((3 + 1) * (3 + 1) * (5 + 1) * (5 + 1))
        assert values["mcc"] == pytest.approx(num / den, abs=1e-12)

    def test_degenerate_denominators_flagged(self):
        values, degenerate = threshold_measures(ConfusionMatrix(tp=0, fp=0, tn=0, fn=4))
        assert values["precision"] == 0.0
        assert "precision" in degenerate
        assert "tnr" in degenerate

    def test_fpr_complements_tnr(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            n = int(rng.integers(2, 30))
            v = pv(rng.random(n), rng.integers(0, 2, n))
            values, _ = threshold_measures(confusion_at_threshold(v))
            c = confusion_at_threshold(v)
            if c.fp + c.tn > 0:
                assert values["fpr"] == pytest.approx(1.0 - values["tnr"], abs=1e-12)

    def test_fmeasure_mean_inequality(self):
        # harmonic <= geometric <= arithmetic mean of (precision, recall)
        rng = np.random.default_rng(2)
        checked = 0
        while checked < 30:
            v = pv(rng.random(25), rng.integers(0, 2, 25))
            values, degenerate = threshold_measures(confusion_at_threshold(v))
            p, r = values["precision"], values["recall"]
            if p <= 0 or r <= 0 or degenerate:
                continue
            harmonic = values["fmeasure"]
            geometric = math.sqrt(p * r)
            arithmetic = (p + r) / 2
            assert harmonic <= geometric + 1e-12 <= arithmetic + 1e-12
            checked += 1

    def test_measures_agree_with_hand_tallied_confusion(self):
        rng = np.random.default_rng(3)
        v = pv(rng.random(40), rng.integers(0, 2, 40))
        tp = fp = tn = fn = 0
        for p, y in zip(v.p, v.y):
            predicted = p > 0.5
            if predicted and y == 1:
                tp += 1
            elif predicted and y == 0:
                fp += 1
            elif not predicted and y == 0:
                tn += 1
            else:
                fn += 1
        from_impl = confusion_at_threshold(v)
        assert (from_impl.tp, from_impl.fp, from_impl.tn, from_impl.fn) == (tp, fp, tn, fn)


class TestAuc:
    def test_perfect_separation(self):
        assert auc(pv([0.9, 0.8, 0.3, 0.1], [1, 1, 0, 0])) == 1.0

    def test_three_quarters(self):
        v = pv([0.9, 0.8, 0.3, 0.1], [1, 0, 1, 0])
        assert pairwise_auc(v.p, v.y) == 0.75
        assert auc(v) == pytest.approx(0.75, abs=1e-12)

    def test_constant_probabilities_random_guessing(self):
        assert auc(pv([0.3] * 6, [1, 0, 1, 0, 0, 1])) == pytest.approx(0.5, abs=1e-12)

    def test_single_class_undefined(self):
        with pytest.raises(ValueError, match="single outcome class"):
            auc(pv([0.2, 0.8], [1, 1]))

    def test_matches_pair_counting_oracle(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            n = int(rng.integers(2, 50))
            y = rng.integers(0, 2, n)
            if y.min() == y.max():
                continue
            p = np.round(rng.random(n), 2)  # rounding forces ties
            v = pv(p, y)
            assert auc(v) == pytest.approx(pairwise_auc(p, y), abs=1e-12)

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(5)
        p = rng.random(30)
        y = np.array([0, 1] * 15)
        base = auc(pv(p, y))
        assert auc(pv(p ** 3, y)) == pytest.approx(base, abs=1e-12)
        assert auc(pv(np.tanh(3 * p), y)) == pytest.approx(base, abs=1e-12)

    def test_label_complement_symmetry(self):
        rng = np.random.default_rng(6)
        p = rng.random(30)
        y = rng.integers(0, 2, 30)
        if y.min() == y.max():
            y[0] = 1 - y[0]
        assert auc(pv(1.0 - p, 1 - y)) == pytest.approx(auc(pv(p, y)), abs=1e-12)


class TestBrierLogloss:
    def test_brier_perfect(self):
        assert brier(pv([1.0, 0.0, 1.0], [1, 0, 1])) == 0.0

    def test_brier_random_guessing(self):
        assert brier(pv([0.5] * 8, [1, 0, 1, 0, 1, 0, 1, 0])) == 0.25

    def test_brier_single_wrongish(self):
        assert brier(pv([0.8], [0])) == pytest.approx(0.64, abs=1e-15)

    def test_brier_bounds(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            v = pv(rng.random(12), rng.integers(0, 2, 12))
            assert 0.0 <= brier(v) <= 1.0

    def test_logloss_perfect_after_clamp(self):
        assert logloss(pv([1.0, 0.0], [1, 0])) <= 1e-14

    def test_logloss_half(self):
        assert logloss(pv([0.5], [1])) == pytest.approx(math.log(2), abs=1e-12)

    def test_logloss_confident_wrong_clamped(self):
        # clamp at 1e-15; the complement is evaluated in float arithmetic
        expected = -math.log(1.0 - (1.0 - 1e-15))
        assert logloss(pv([1.0], [0])) == pytest.approx(expected, abs=1e-12)
        assert logloss(pv([1.0], [0])) == pytest.approx(34.54, abs=0.01)


def test_evaluate_predictions_row_order():
    rng = np.random.default_rng(8)
    v = pv(rng.random(20), [0, 1] * 10)
    perf = evaluate_predictions(v)
    row = perf.as_row()
    assert row[0] == perf.precision
    assert row[-1] == perf.logloss
    assert len(row) == 12
    assert perf.auc == auc(v)
    assert -1.0 <= perf.mcc <= 1.0
    assert perf.logloss >= 0.0


def test_prediction_vector_invariants():
    with pytest.raises(ValueError):
        PredictionVector(np.array([0.5, 1.2]), np.array([0, 1]))
    with pytest.raises(ValueError):
        PredictionVector(np.array([0.5]), np.array([2]))
    with pytest.raises(ValueError):
        PredictionVector(np.array([]), np.array([]))
