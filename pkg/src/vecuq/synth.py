"""Seeded synthetic data, a small softmax trainer, and desk-scale experiments.

Everything here is bit-deterministic given the seed.  The two-Gaussian
binary problem pairs a well-calibrated in-distribution region with an
out-of-distribution Gaussian placed far from the data but deep inside one
decision region, so the softmax stays confidently wrong there; the blobs
problem arranges classes on a circle for map-style visualization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rank
from .baselines import (
    fit_gaussian_stats,
    mahalanobis_score,
    one_minus_msp,
    predictive_entropy,
)
from .metrics import roc_auc
from .reference import Beta, Exponential
from .scores import stack

TOY_MEAN_0 = (-0.8, 0.0)
TOY_MEAN_1 = (0.8, 0.2)
TOY_COVARIANCE = ((1.0, 0.6), (0.6, 1.2))
TOY_OOD_MEAN = (-4.0, 4.0)
TOY_OOD_COVARIANCE = ((0.25, 0.0), (0.0, 0.25))


@dataclass(frozen=True)
class MixtureComponent:
    mean: tuple
    covariance: tuple
    label: int
    count: int

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.covariance, dtype=float)
        if mean.ndim != 1 or cov.shape != (mean.size, mean.size):
            raise ValueError("component covariance must be d x d for a d-vector mean")
        if self.count < 1:
            raise ValueError("component count must be at least 1")


@dataclass(frozen=True)
class GaussianMixtureSpec:
    components: tuple[MixtureComponent, ...]

    def __post_init__(self):
        components = tuple(self.components)
        if not components:
            raise ValueError("mixture needs at least one component")
        object.__setattr__(self, "components", components)


def sample_mixture(spec: GaussianMixtureSpec, seed: int):
    """Draw every component (Cholesky transform), grouped then concatenated."""
    rng = np.random.default_rng(seed)
    xs, ys = [], []
    for component in spec.components:
        mean = np.asarray(component.mean, dtype=float)
        cov = np.asarray(component.covariance, dtype=float)
        try:
            chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as exc:
            raise ValueError(
                f"component covariance for label {component.label} is not "
                f"positive-definite"
            ) from exc
        z = rng.standard_normal((component.count, mean.size))
        xs.append(mean + z @ chol.T)
        ys.append(np.full(component.count, component.label, dtype=int))
    return np.vstack(xs), np.concatenate(ys)


@dataclass(frozen=True)
class ToyData:
    train_x: np.ndarray
    train_y: np.ndarray
    test_x: np.ndarray
    test_y: np.ndarray
    ood_x: np.ndarray


def make_toy_experiment(
    seed: int,
    ood_mean=TOY_OOD_MEAN,
    train_per_class: int = 2000,
    test_per_class: int = 2000,
    ood_count: int = 2000,
) -> ToyData:
    """Two overlapping Gaussian classes plus a far-out OOD Gaussian."""
    train_spec = GaussianMixtureSpec(
        tuple(
            MixtureComponent(mean, TOY_COVARIANCE, label, train_per_class)
            for label, mean in enumerate((TOY_MEAN_0, TOY_MEAN_1))
        )
    )
    test_spec = GaussianMixtureSpec(
        tuple(
            MixtureComponent(mean, TOY_COVARIANCE, label, test_per_class)
            for label, mean in enumerate((TOY_MEAN_0, TOY_MEAN_1))
        )
    )
    ood_spec = GaussianMixtureSpec(
        (MixtureComponent(tuple(ood_mean), TOY_OOD_COVARIANCE, 0, ood_count),)
    )
    seeds = np.random.SeedSequence(seed).generate_state(3)
    train_x, train_y = sample_mixture(train_spec, int(seeds[0]))
    test_x, test_y = sample_mixture(test_spec, int(seeds[1]))
    ood_x, _ = sample_mixture(ood_spec, int(seeds[2]))
    return ToyData(train_x, train_y, test_x, test_y, ood_x)


def make_blobs(n_classes: int, radius: float, std: float, per_class: int, seed: int):
    """Isotropic Gaussian blobs centered uniformly on a circle."""
    if n_classes < 2:
        raise ValueError("make_blobs needs at least two classes")
    angles = 2 * np.pi * np.arange(n_classes) / n_classes
    components = tuple(
        MixtureComponent(
            (radius * np.cos(a), radius * np.sin(a)),
            ((std**2, 0.0), (0.0, std**2)),
            label,
            per_class,
        )
        for label, a in enumerate(angles)
    )
    return sample_mixture(GaussianMixtureSpec(components), seed)


@dataclass(frozen=True)
class LinearSoftmaxModel:
    weights: np.ndarray
    biases: np.ndarray
    final_loss: float

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float)
        biases = np.asarray(self.biases, dtype=float)
        if not (np.isfinite(weights).all() and np.isfinite(biases).all()):
            raise ValueError("model parameters must be finite")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "biases", biases)


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _cross_entropy(probs: np.ndarray, y: np.ndarray) -> float:
    return float(-np.log(probs[np.arange(y.size), y]).mean())


def train_softmax(X, y, epochs: int = 500, learning_rate: float = 0.5, seed: int = 0):
    """Full-batch gradient descent on cross-entropy from zero initialization.

    Deterministic regardless of ``seed`` (zero init, full batches); the seed
    argument is kept for interface stability with other generators.
    """
    del seed
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ValueError("X must be n x d with one label per row")
    n_classes = int(y.max()) + 1
    if np.unique(y).size < 2:
        raise ValueError("training requires at least two classes")
    n, d = X.shape
    weights = np.zeros((n_classes, d))
    biases = np.zeros(n_classes)
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), y] = 1.0
    for _ in range(epochs):
        probs = _softmax(X @ weights.T + biases)
        delta = (probs - onehot) / n
        weights -= learning_rate * delta.T @ X
        biases -= learning_rate * delta.sum(axis=0)
    final_probs = _softmax(X @ weights.T + biases)
    return LinearSoftmaxModel(weights, biases, _cross_entropy(final_probs, y))


def predict_proba(model: LinearSoftmaxModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return _softmax(X @ model.weights.T + model.biases)


def softmax_gradients(weights, biases, X, y):
    """Analytic cross-entropy gradients for one parameter setting (for checks)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    n = X.shape[0]
    n_classes = np.asarray(weights).shape[0]
    probs = _softmax(X @ np.asarray(weights).T + np.asarray(biases))
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), y] = 1.0
    delta = (probs - onehot) / n
    return delta.T @ X, delta.sum(axis=0)


def _calibration_indices(n: int, size: int) -> np.ndarray:
    """Evenly strided row picks: deterministic and class-balanced for grouped data."""
    size = min(size, n)
    return np.unique(np.linspace(0, n - 1, size).astype(int))


MEASURE_NAMES = ("one_minus_msp", "mahalanobis")


def toy_experiment_report(
    seed: int = 0,
    *,
    scaling_kind: str = "featurewise",
    reference_family: Exponential | Beta | None = None,
    gamma: float = 5.0,
    epsilon: float = 0.5,
    ood_mean=TOY_OOD_MEAN,
    train_per_class: int = 2000,
    test_per_class: int = 2000,
    ood_count: int = 2000,
    calibration_size: int = 400,
    epochs: int = 300,
    max_iters: int = 10000,
    tol: float = 1e-6,
) -> dict:
    """Run the two-Gaussian experiment end to end and return scores and AUCs.

    Trains the softmax classifier, computes the two scalar measures for the
    calibration (train subsample), test, and OOD splits, fits the rank model
    on the calibration vectors, and evaluates misclassification and OOD
    detection ROC-AUC for all three methods.
    """
    data = make_toy_experiment(
        seed,
        ood_mean=ood_mean,
        train_per_class=train_per_class,
        test_per_class=test_per_class,
        ood_count=ood_count,
    )
    classifier = train_softmax(data.train_x, data.train_y, epochs=epochs)
    stats = fit_gaussian_stats(data.train_x, data.train_y)

    def score_split(x):
        probs = predict_proba(classifier, x)
        return one_minus_msp(probs), mahalanobis_score(stats, x)

    msp_train, mah_train = score_split(data.train_x)
    msp_test, mah_test = score_split(data.test_x)
    msp_ood, mah_ood = score_split(data.ood_x)

    test_pred = predict_proba(classifier, data.test_x).argmax(axis=1)
    miscls_labels = (test_pred != data.test_y).astype(int)
    ood_labels = np.concatenate(
        [np.zeros(len(data.test_x), dtype=int), np.ones(len(data.ood_x), dtype=int)]
    )

    cal_idx = _calibration_indices(len(data.train_x), calibration_size)
    calibration = stack([msp_train[cal_idx], mah_train[cal_idx]], MEASURE_NAMES)
    model = rank.fit(
        calibration,
        scaling_kind,
        reference_family,
        rank.AnchorConfig(gamma),
        epsilon,
        max_iters=max_iters,
        tol=tol,
    )
    rank_test = rank.rank_score(model, stack([msp_test, mah_test], MEASURE_NAMES))
    rank_ood = rank.rank_score(model, stack([msp_ood, mah_ood], MEASURE_NAMES))

    method_scores = {
        "one_minus_msp": (msp_test, msp_ood),
        "mahalanobis": (mah_test, mah_ood),
        "vecuq": (rank_test, rank_ood),
    }
    aucs = {
        name: {
            "miscls": roc_auc(test_scores, miscls_labels),
            "ood": roc_auc(np.concatenate([test_scores, ood_scores]), ood_labels),
        }
        for name, (test_scores, ood_scores) in method_scores.items()
    }
    return {
        "aucs": aucs,
        "model": model,
        "calibration": calibration,
        "test_scores": {"one_minus_msp": msp_test, "mahalanobis": mah_test, "vecuq": rank_test},
        "ood_scores": {"one_minus_msp": msp_ood, "mahalanobis": mah_ood, "vecuq": rank_ood},
        "miscls_labels": miscls_labels,
        "ood_labels": ood_labels,
    }


def blobs_report(
    seed: int = 0,
    *,
    n_classes: int = 10,
    radius: float = 8.0,
    std: float = 1.0,
    per_class: int = 200,
    grid_extent: float = 12.0,
    grid_side: int = 60,
    scaling_kind: str = "featurewise",
    reference_family: Exponential | Beta | None = None,
    gamma: float = 5.0,
    epsilon: float = 0.5,
    calibration_size: int = 400,
    epochs: int = 300,
) -> dict:
    """Circle-of-blobs experiment: per-grid-point scores for map plotting."""
    X, y = make_blobs(n_classes, radius, std, per_class, seed)
    classifier = train_softmax(X, y, epochs=epochs)
    stats = fit_gaussian_stats(X, y)

    axis = np.linspace(-grid_extent, grid_extent, grid_side)
    gx, gy = np.meshgrid(axis, axis, indexing="ij")
    grid = np.column_stack([gx.ravel(), gy.ravel()])

    def score_points(points):
        probs = predict_proba(classifier, points)
        return predictive_entropy(probs), mahalanobis_score(stats, points)

    entropy_train, mah_train = score_points(X)
    entropy_grid, mah_grid = score_points(grid)

    names = ("entropy", "mahalanobis")
    cal_idx = _calibration_indices(len(X), calibration_size)
    model = rank.fit(
        stack([entropy_train[cal_idx], mah_train[cal_idx]], names),
        scaling_kind,
        reference_family,
        rank.AnchorConfig(gamma),
        epsilon,
    )
    rank_grid = rank.rank_score(model, stack([entropy_grid, mah_grid], names))
    return {
        "points": X,
        "labels": y,
        "grid": grid,
        "entropy": entropy_grid,
        "mahalanobis": mah_grid,
        "vecuq": rank_grid,
        "model": model,
    }
