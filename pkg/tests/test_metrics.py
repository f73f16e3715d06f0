"""AUC-ROC, balanced accuracy, and threshold selection."""

import random

import numpy as np
import pytest

from factalign.metrics import (
    SingleClassError,
    auc_roc,
    balanced_accuracy,
    select_threshold,
    select_threshold_detail,
)


def auc_brute_force(scores, labels):
    """Independent oracle: exhaustive concordant-pair counting, ties 0.5."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    pos = scores[labels][:, None]
    neg = scores[~labels][None, :]
    wins = (pos > neg).sum() + 0.5 * (pos == neg).sum()
    return float(wins) / (int(labels.sum()) * int((~labels).sum()))


class TestAucRoc:
    def test_perfect_separation(self):
        assert auc_roc([0.9, 0.8, 0.7, 0.1], [True, True, False, False]) == 1.0

    def test_three_quarters_by_pair_count(self):
        scores = [0.8, 0.4, 0.6, 0.2]
        labels = [True, True, False, False]
        assert auc_roc(scores, labels) == 0.75
        assert auc_brute_force(scores, labels) == 0.75

    def test_all_ties_give_half(self):
        assert auc_roc([0.5] * 8, [True] * 4 + [False] * 4) == 0.5

    def test_single_class_is_typed_error(self):
        with pytest.raises(SingleClassError):
            auc_roc([0.1, 0.2], [True, True])
        with pytest.raises(SingleClassError):
            auc_roc([], [])

    def test_matches_brute_force_on_random_data(self):
        rng = random.Random(31)
        for _ in range(200):
            n = rng.randint(2, 120)
            scores = [rng.choice([rng.random(), round(rng.random(), 1)]) for _ in range(n)]
            labels = [rng.random() < 0.5 for _ in range(n)]
            if all(labels) or not any(labels):
                labels[0] = not labels[0]
            assert auc_roc(scores, labels) == pytest.approx(
                auc_brute_force(scores, labels), abs=1e-12
            )

    def test_invariant_under_monotone_transform(self):
        rng = random.Random(17)
        scores = [rng.random() for _ in range(60)]
        labels = [rng.random() < 0.4 for _ in range(60)]
        labels[0], labels[1] = True, False
        base = auc_roc(scores, labels)
        squashed = auc_roc([s**3 + 2 for s in scores], labels)
        assert squashed == pytest.approx(base, abs=1e-12)


class TestBalancedAccuracy:
    def test_perfect_classifier(self):
        assert balanced_accuracy([0.9, 0.8, 0.2, 0.1], [True, True, False, False], 0.5) == 1.0

    def test_half_by_direct_count(self):
        assert balanced_accuracy([0.9, 0.4, 0.6, 0.1], [True, True, False, False], 0.5) == 0.5

    def test_degenerate_threshold(self):
        assert balanced_accuracy([0.9, 0.8, 0.2], [True, True, False], 1.1) == 0.5  # TPR 0, TNR 1


class TestSelectThreshold:
    def test_separable_returns_lowest_midpoint_in_gap(self):
        scores = [0.1, 0.2, 0.8, 0.9] * 4
        labels = [False, False, True, True] * 4
        threshold = select_threshold(scores, labels, split_seed=0)
        assert 0.2 < threshold < 0.8
        # lowest midpoint achieving max balanced accuracy on the fit half
        assert threshold == 0.5

    def test_identical_scores_fall_back(self):
        assert select_threshold([0.5] * 10, [True, False] * 5, split_seed=0) == 0.5

    def test_split_disabled_falls_back(self):
        threshold, held = select_threshold_detail([0.1, 0.9], [False, True], split_seed=None)
        assert threshold == 0.5 and held is None

    def test_deterministic_for_seed(self):
        rng = random.Random(2)
        scores = [rng.random() for _ in range(50)]
        labels = [rng.random() < 0.5 for _ in range(50)]
        labels[0], labels[1] = True, False
        assert select_threshold(scores, labels, 7) == select_threshold(scores, labels, 7)

    def test_reports_holdout_balanced_accuracy(self):
        scores = [0.05, 0.1, 0.15, 0.85, 0.9, 0.95] * 4
        labels = [False, False, False, True, True, True] * 4
        threshold, held = select_threshold_detail(scores, labels, split_seed=1)
        assert held == 1.0
        assert 0.15 < threshold < 0.85
