"""Evaluation metrics: AUC-ROC (rank statistic with midrank ties), balanced
accuracy, and deterministic threshold selection."""

from __future__ import annotations

import random

import numpy as np

from .errors import DataError


class SingleClassError(DataError):
    """Metric undefined: the label vector contains only one class."""


def _as_arrays(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels, dtype=bool)
    if s.shape != y.shape or s.ndim != 1:
        raise DataError(f"scores and labels must be 1-d and equal length, got {s.shape} vs {y.shape}")
    if s.size == 0:
        raise SingleClassError("empty input")
    n_pos = int(y.sum())
    if n_pos == 0 or n_pos == y.size:
        raise SingleClassError(f"need both classes, got {n_pos} positives of {y.size}")
    return s, y


def _midranks(sorted_values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing the average rank of their block."""
    n = sorted_values.size
    ranks = np.empty(n, dtype=np.float64)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and sorted_values[j + 1] == sorted_values[i]:
            j += 1
        ranks[i : j + 1] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def auc_roc(scores, labels) -> float:
    """Probability that a random positive outscores a random negative.

    Computed as the Mann-Whitney U statistic with midrank tie handling,
    which equals trapezoidal integration of the ROC curve.
    """
    s, y = _as_arrays(scores, labels)
    order = np.argsort(s, kind="stable")
    ranks_sorted = _midranks(s[order])
    ranks = np.empty_like(ranks_sorted)
    ranks[order] = ranks_sorted
    n_pos = int(y.sum())
    n_neg = y.size - n_pos
    rank_sum = float(ranks[y].sum())
    u = rank_sum - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def balanced_accuracy(scores, labels, threshold: float) -> float:
    """(TPR + TNR) / 2 with prediction = score >= threshold."""
    s, y = _as_arrays(scores, labels)
    pred = s >= threshold
    tpr = float(pred[y].mean())
    tnr = float((~pred[~y]).mean())
    return (tpr + tnr) / 2.0


def select_threshold(scores, labels, split_seed: int | None = 0) -> float:
    """Pick a decision threshold by grid search over unique score midpoints.

    The search maximizes balanced accuracy on a seeded 50% split (ties break
    toward the lowest midpoint). With splitting disabled (split_seed=None)
    or degenerate scores, falls back to 0.5. select_threshold_detail also
    reports the held-out balanced accuracy.
    """
    return select_threshold_detail(scores, labels, split_seed)[0]


def select_threshold_detail(scores, labels, split_seed: int | None = 0) -> tuple[float, float | None]:
    s, y = _as_arrays(scores, labels)
    if split_seed is None:
        return 0.5, None
    idx = list(range(s.size))
    random.Random(split_seed).shuffle(idx)
    half = s.size // 2
    fit_idx = np.asarray(idx[:half] if half else idx, dtype=np.intp)
    held_idx = np.asarray(idx[half:], dtype=np.intp)
    fit_s, fit_y = s[fit_idx], y[fit_idx]
    if fit_y.all() or not fit_y.any():
        # the seeded split left one class empty; fit on everything instead
        fit_s, fit_y = s, y
        held_idx = np.asarray([], dtype=np.intp)
    uniq = np.unique(fit_s)
    if uniq.size < 2:
        return 0.5, None
    midpoints = (uniq[:-1] + uniq[1:]) / 2.0
    best_t = None
    best_ba = -1.0
    for t in midpoints:  # ascending, so ties keep the lowest midpoint
        ba = balanced_accuracy(fit_s, fit_y, float(t))
        if ba > best_ba:
            best_ba = ba
            best_t = float(t)
    held_ba = None
    if held_idx.size:
        held_s, held_y = s[held_idx], y[held_idx]
        if held_y.any() and not held_y.all():
            held_ba = balanced_accuracy(held_s, held_y, best_t)
    return best_t, held_ba
