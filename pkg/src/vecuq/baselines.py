"""Scalar uncertainty measures: predictive entropy, 1-MSP, Mahalanobis score.

The Mahalanobis score uses per-class embedding means with a single pooled
within-class covariance (1/N normalization) and reports the minimum squared
distance over classes; no square root is taken, which is monotone-equivalent
for ranking.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .scores import _readonly

_PROB_SUM_TOL = 1e-9
_RIDGE_SCALE = 1e-6
_EIG_FLOOR_SCALE = 1e-10


def _check_probs(probs) -> np.ndarray:
    p = np.asarray(probs, dtype=float)
    if p.ndim == 0 or p.shape[-1] < 1:
        raise ValueError("probabilities must have at least one class on the last axis")
    if not np.isfinite(p).all():
        raise ValueError("probabilities contain non-finite entries")
    if (p < 0).any():
        raise ValueError("probabilities must be nonnegative")
    if np.any(np.abs(p.sum(axis=-1) - 1.0) > _PROB_SUM_TOL):
        raise ValueError("probabilities must sum to 1 along the last axis")
    return p


def predictive_entropy(probs):
    """Shannon entropy -sum p log p in nats, with 0 log 0 = 0.

    Accepts a single distribution or a batch with classes on the last axis.
    """
    p = _check_probs(probs)
    terms = np.zeros_like(p)
    positive = p > 0
    terms[positive] = p[positive] * np.log(p[positive])
    out = -terms.sum(axis=-1)
    return float(out) if out.ndim == 0 else out


def one_minus_msp(probs):
    """One minus the maximum softmax probability."""
    p = _check_probs(probs)
    out = 1.0 - p.max(axis=-1)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class GaussianClassStats:
    """Per-class means with pooled covariance and its cached inverse."""

    means: np.ndarray
    pooled_cov: np.ndarray
    precision: np.ndarray
    ridge: float = 0.0

    def __post_init__(self):
        for name in ("means", "pooled_cov", "precision"):
            object.__setattr__(self, name, _readonly(getattr(self, name)))
        if self.means.ndim != 2:
            raise ValueError("means must be a classes x dimension matrix")
        d = self.means.shape[1]
        if self.pooled_cov.shape != (d, d) or self.precision.shape != (d, d):
            raise ValueError("covariance and precision must be d x d")

    @property
    def n_classes(self) -> int:
        return self.means.shape[0]

    @property
    def dimension(self) -> int:
        return self.means.shape[1]


def fit_gaussian_stats(embeddings, class_ids) -> GaussianClassStats:
    """Fit per-class means and the pooled within-class covariance.

    Near-singular covariances get a ridge of 1e-6 * trace / d (absolute
    1e-6 when the covariance vanishes entirely); the event is reported via
    a warning and the ``ridge`` field.
    """
    X = np.asarray(embeddings, dtype=float)
    y = np.asarray(class_ids)
    if X.ndim != 2:
        raise ValueError("embeddings must be a samples x dimension matrix")
    if not np.isfinite(X).all():
        raise ValueError("embeddings contain non-finite entries")
    if y.shape != (X.shape[0],):
        raise ValueError("class_ids must be 1-d with one entry per embedding")
    y = y.astype(int)
    n, d = X.shape
    n_classes = int(y.max()) + 1 if y.size else 0
    if y.size == 0 or (y < 0).any():
        raise ValueError("class ids must be nonnegative integers")

    means = np.empty((n_classes, d))
    for c in range(n_classes):
        members = y == c
        if not members.any():
            raise ValueError(f"class {c} has no samples")
        means[c] = X[members].mean(axis=0)

    centered = X - means[y]
    pooled = centered.T @ centered / n
    pooled = 0.5 * (pooled + pooled.T)

    trace = float(np.trace(pooled))
    eigenvalues = np.linalg.eigvalsh(pooled)
    ridge = 0.0
    if eigenvalues.min() < _EIG_FLOOR_SCALE * trace / d or trace == 0.0:
        ridge = _RIDGE_SCALE * trace / d if trace > 0 else _RIDGE_SCALE
        pooled = pooled + ridge * np.eye(d)
        warnings.warn(
            f"pooled covariance near singular; added ridge {ridge:.3e}",
            RuntimeWarning,
            stacklevel=2,
        )

    factor = cho_factor(pooled, lower=True)
    precision = cho_solve(factor, np.eye(d))
    precision = 0.5 * (precision + precision.T)
    return GaussianClassStats(means, pooled, precision, ridge)


def mahalanobis_score(stats: GaussianClassStats, embedding):
    """Minimum over classes of the squared Mahalanobis distance.

    Accepts a single d-vector or a batch of rows.
    """
    X = np.asarray(embedding, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.shape[1] != stats.dimension:
        raise ValueError(
            f"embedding has dimension {X.shape[1]} but stats expect {stats.dimension}"
        )
    diffs = X[:, None, :] - stats.means[None, :, :]
    quad = np.einsum("kcd,de,kce->kc", diffs, stats.precision, diffs)
    scores = np.maximum(quad, 0.0).min(axis=1)
    return float(scores[0]) if single else scores
