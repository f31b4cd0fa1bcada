"""Downstream evaluation metrics for uncertainty orderings.

All metrics depend on the scores only through their ordering, with the
standard tie conventions: half credit in ROC-AUC, stable (input-order) ties
when sorting by uncertainty.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np
from scipy.stats import rankdata


def _score_label_arrays(scores, labels):
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    if scores.ndim != 1 or labels.shape != scores.shape:
        raise ValueError("scores and labels must be 1-d arrays of equal length")
    if not np.isfinite(scores).all():
        raise ValueError("scores contain non-finite entries")
    return scores, labels


def roc_auc(scores, labels) -> float:
    """Probability a random positive outscores a random negative (ties 0.5).

    Mann-Whitney statistic via average ranks, O(n log n).
    """
    scores, labels = _score_label_arrays(scores, labels)
    positive = labels.astype(bool)
    n_pos = int(positive.sum())
    n_neg = positive.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("roc_auc needs at least one positive and one negative label")
    ranks = rankdata(scores, method="average")
    u_stat = ranks[positive].sum() - n_pos * (n_pos + 1) / 2
    return float(u_stat / (n_pos * n_neg))


def accuracy_coverage_auc(uncertainty, correct) -> float:
    """Mean prefix accuracy while admitting samples in ascending uncertainty.

    Samples are sorted stably by uncertainty (ties keep input order);
    accuracy is evaluated after each admission and averaged over the n
    coverage levels i/n.
    """
    uncertainty, correct = _score_label_arrays(uncertainty, correct)
    order = np.argsort(uncertainty, kind="stable")
    kept = correct[order].astype(float)
    n = kept.size
    prefix_accuracy = np.cumsum(kept) / np.arange(1, n + 1)
    return float(prefix_accuracy.mean())


def _rejection_curve(quality_in_keep_order: np.ndarray, n_points: int) -> np.ndarray:
    """Mean quality of the kept prefix after rejecting i samples, i = 0..n_points-1."""
    n = quality_in_keep_order.size
    prefix = np.cumsum(quality_in_keep_order)
    kept = n - np.arange(n_points)
    return prefix[kept - 1] / kept


def prr(uncertainty, quality, max_rejection: float = 0.5) -> float:
    """Prediction rejection ratio: gain over random rejection, normalized by the oracle.

    The rejection curve keeps the (1 - rho) fraction with lowest uncertainty
    and reports its mean quality, evaluated at rho = i/n up to
    ``max_rejection``.  The oracle rejects in descending-quality keep order;
    the random baseline is the constant overall mean.  Returns
    (area_unc - area_rnd) / (area_oracle - area_rnd).
    """
    uncertainty, quality = _score_label_arrays(uncertainty, quality)
    quality = quality.astype(float)
    if not np.isfinite(quality).all():
        raise ValueError("quality contains non-finite entries")
    n = quality.size
    if n < 2:
        raise ValueError("prr needs at least two samples")
    if not (0 < max_rejection <= 1):
        raise ValueError("max_rejection must lie in (0, 1]")
    if np.ptp(quality) == 0:
        raise ValueError("prr is undefined when all quality values are equal")
    # Rejection grid 0..K; keep at least one sample so prefix means exist.
    n_points = min(int(np.floor(max_rejection * n)), n - 1) + 1
    if n_points < 2:
        raise ValueError("max_rejection rejects less than one sample; increase it")

    by_uncertainty = quality[np.argsort(uncertainty, kind="stable")]
    by_quality_desc = quality[np.argsort(-quality, kind="stable")]

    area_unc = _rejection_curve(by_uncertainty, n_points).sum() / n
    area_oracle = _rejection_curve(by_quality_desc, n_points).sum() / n
    area_random = quality.mean() * n_points / n
    return float((area_unc - area_random) / (area_oracle - area_random))


def pareto_front_share(values, pairs=None) -> np.ndarray:
    """Fraction of task pairs on which each method is weakly non-dominated.

    ``values`` is methods x tasks, higher better.  For each unordered task
    pair a method is on the front iff no other method is >= in both
    coordinates and > in at least one; equal rows are both on the front.
    ``pairs`` optionally restricts the pair universe (default: all unordered
    column pairs).
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 2:
        raise ValueError("values must be a methods x tasks matrix")
    if not np.isfinite(values).all():
        raise ValueError("values contain non-finite entries")
    n_methods, n_tasks = values.shape
    if pairs is None:
        if n_tasks < 2:
            raise ValueError("pareto_front_share needs at least two tasks")
        pairs = list(combinations(range(n_tasks), 2))
    else:
        pairs = [(int(a), int(b)) for a, b in pairs]
        if not pairs:
            raise ValueError("the pair universe must be nonempty")
        for a, b in pairs:
            if not (0 <= a < n_tasks and 0 <= b < n_tasks) or a == b:
                raise ValueError(f"invalid task pair ({a}, {b})")

    on_front_counts = np.zeros(n_methods)
    for a, b in pairs:
        points = values[:, [a, b]]
        ge = (points[None, :, :] >= points[:, None, :]).all(axis=2)
        gt = (points[None, :, :] > points[:, None, :]).any(axis=2)
        dominated = (ge & gt).any(axis=1)
        on_front_counts += ~dominated
    return on_front_counts / len(pairs)
