"""Vector uncertainty aggregation via entropic optimal-transport ranks.

Stack several per-sample uncertainty measures into score vectors, fit an
entropy-regularized coupling from the calibration vectors to an isotropic
reference cloud, and order arbitrary new vectors by the norm of their
barycentric projection.  Includes the scalar baseline measures, downstream
evaluation metrics, and seeded synthetic experiments.
"""

from .baselines import (
    GaussianClassStats,
    fit_gaussian_stats,
    mahalanobis_score,
    one_minus_msp,
    predictive_entropy,
)
from .errors import NumericalError
from .metrics import accuracy_coverage_auc, pareto_front_share, prr, roc_auc
from .rank import AnchorConfig, RankModel, fit, make_anchors, project, rank_score
from .reference import (
    Beta,
    Exponential,
    ReferenceCloud,
    ReferenceSpec,
    inverse_cdf,
    sample_reference,
    unit_grid,
)
from .scores import ScoreMatrix, Scaler, apply_scaler, fit_scaler, stack
from .sinkhorn import Coupling, cost_matrix, fit_coupling
from .synth import (
    GaussianMixtureSpec,
    LinearSoftmaxModel,
    MixtureComponent,
    ToyData,
    blobs_report,
    make_blobs,
    make_toy_experiment,
    predict_proba,
    sample_mixture,
    toy_experiment_report,
    train_softmax,
)

__version__ = "0.1.0"

__all__ = [
    "AnchorConfig",
    "Beta",
    "Coupling",
    "Exponential",
    "GaussianClassStats",
    "GaussianMixtureSpec",
    "LinearSoftmaxModel",
    "MixtureComponent",
    "NumericalError",
    "RankModel",
    "ReferenceCloud",
    "ReferenceSpec",
    "Scaler",
    "ScoreMatrix",
    "ToyData",
    "accuracy_coverage_auc",
    "apply_scaler",
    "blobs_report",
    "cost_matrix",
    "fit",
    "fit_coupling",
    "fit_gaussian_stats",
    "fit_scaler",
    "inverse_cdf",
    "make_anchors",
    "make_blobs",
    "make_toy_experiment",
    "mahalanobis_score",
    "one_minus_msp",
    "pareto_front_share",
    "predict_proba",
    "predictive_entropy",
    "project",
    "prr",
    "rank_score",
    "roc_auc",
    "sample_mixture",
    "sample_reference",
    "stack",
    "toy_experiment_report",
    "train_softmax",
    "unit_grid",
]
