"""Transport-rank pipeline: scale, anchor, couple to a reference, project.

Fitting scales the calibration scores, appends outer anchor points beyond
the scaled calibration box, samples a matching reference cloud, and fits the
entropic coupling.  New score vectors are ranked by the Euclidean norm of
their barycentric projection into the reference cloud: larger norm means
more uncertain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .reference import Beta, Exponential, ReferenceCloud, ReferenceSpec, sample_reference
from .scores import Scaler, ScoreMatrix, apply_scaler, fit_scaler
from .sinkhorn import (
    DEFAULT_EPSILON,
    DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
    Coupling,
    cost_matrix,
    fit_coupling,
)

# 2**m anchor growth; past this the anchors must be disabled.
ANCHOR_DIMENSION_CAP = 20

DEFAULT_GAMMA = 5.0

# Rows projected per slice: bounds the rows x atoms x dims temporaries for
# large query batches.  Per-row results do not depend on the slicing.
_PROJECTION_CHUNK = 4096


@dataclass(frozen=True)
class AnchorConfig:
    """Outer-anchor multiplier; gamma = 0 disables anchors entirely."""

    gamma: float = DEFAULT_GAMMA

    def __post_init__(self):
        if self.gamma != 0 and not (self.gamma > 1):
            raise ValueError("gamma must be 0 (disabled) or greater than 1")

    @property
    def enabled(self) -> bool:
        return self.gamma > 0


def make_anchors(maxes_scaled, gamma: float) -> np.ndarray:
    """All nonzero corners of the box [0, gamma*M_1] x ... x [0, gamma*M_m].

    Returns 2**m - 1 rows; requires every scaled maximum to be positive so
    the corners are distinct.
    """
    maxes = np.asarray(maxes_scaled, dtype=float)
    if maxes.ndim != 1:
        raise ValueError("scaled maxima must be a 1-d array")
    m = maxes.size
    if m > ANCHOR_DIMENSION_CAP:
        raise ValueError(
            f"{m} measures would create 2**{m} - 1 anchors; disable anchors "
            f"(gamma = 0) beyond {ANCHOR_DIMENSION_CAP} measures"
        )
    if not (gamma > 1):
        raise ValueError("gamma must exceed 1 when anchors are enabled")
    if (maxes <= 0).any():
        raise ValueError("anchor placement requires positive scaled maxima")
    masks = np.arange(1, 2**m)
    bits = (masks[:, None] >> np.arange(m)[None, :]) & 1
    return bits * (gamma * maxes)[None, :]


def _anchor_block(scaled_maxes: np.ndarray, gamma: float) -> np.ndarray:
    """Anchor rows for possibly degenerate maxima.

    Corners are generated over the coordinates with positive scaled maxima
    only (zero-max coordinates admit a single corner value, so including
    them would just duplicate rows); the set of distinct nonzero corners is
    preserved.  All-constant data yields no anchors.
    """
    m = scaled_maxes.size
    positive = scaled_maxes > 0
    if not positive.any():
        return np.empty((0, m))
    corners = make_anchors(scaled_maxes[positive], gamma)
    anchors = np.zeros((corners.shape[0], m))
    anchors[:, positive] = corners
    return anchors


@dataclass(frozen=True)
class RankModel:
    """Fitted pipeline: scaler + anchors + reference + coupling."""

    scaler: Scaler
    anchor_config: AnchorConfig
    reference: ReferenceCloud
    coupling: Coupling
    measure_names: tuple[str, ...]
    epsilon: float
    reference_family: Exponential | Beta = Beta()

    def __post_init__(self):
        object.__setattr__(self, "measure_names", tuple(self.measure_names))

    @property
    def n_measures(self) -> int:
        return len(self.measure_names)

    def project(self, query: ScoreMatrix) -> np.ndarray:
        return project(self, query)

    def score(self, query: ScoreMatrix) -> np.ndarray:
        return rank_score(self, query)


def fit(
    calibration: ScoreMatrix,
    scaling_kind: str = "featurewise",
    reference_spec: ReferenceSpec | Exponential | Beta | None = None,
    anchor_config: AnchorConfig | None = None,
    epsilon: float = DEFAULT_EPSILON,
    *,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
) -> RankModel:
    """Fit the full rank model on calibration score vectors.

    ``reference_spec`` may be a marginal family (Exponential or Beta, the
    default) or a full ReferenceSpec; either way the reference dimension and
    atom budget are derived from the data, the budget matching the augmented
    source size (calibration rows plus anchors).  Source weights are uniform
    over all source rows, anchors included.
    """
    if reference_spec is None:
        family = Beta()
    elif isinstance(reference_spec, ReferenceSpec):
        family = reference_spec.family
    elif isinstance(reference_spec, (Exponential, Beta)):
        family = reference_spec
    else:
        raise ValueError(f"unsupported reference spec {reference_spec!r}")
    anchor_config = anchor_config if anchor_config is not None else AnchorConfig()

    scaler = fit_scaler(scaling_kind, calibration)
    scaled = apply_scaler(scaler, calibration).values
    m = scaled.shape[1]

    if anchor_config.enabled:
        anchors = _anchor_block(scaled.max(axis=0), anchor_config.gamma)
        source = np.vstack([scaled, anchors]) if anchors.size else np.array(scaled)
    else:
        source = np.array(scaled)

    p = source.shape[0]
    reference = sample_reference(ReferenceSpec(family, m, p))
    coupling = fit_coupling(
        source,
        np.full(p, 1.0 / p),
        reference,
        epsilon=epsilon,
        max_iters=max_iters,
        tol=tol,
    )
    return RankModel(
        scaler=scaler,
        anchor_config=anchor_config,
        reference=reference,
        coupling=coupling,
        measure_names=calibration.measure_names,
        epsilon=epsilon,
        reference_family=family,
    )


def _project_block(model: RankModel, points: np.ndarray) -> np.ndarray:
    atoms = model.reference.atoms
    logits = model.coupling.log_v[None, :] - cost_matrix(points, atoms) / model.epsilon
    log_w = logits - logsumexp(logits, axis=1, keepdims=True)
    # einsum keeps the per-row reduction order independent of the batch size,
    # so chunked scoring reproduces whole-batch scoring bit for bit
    return np.einsum("kq,qm->km", np.exp(log_w), atoms)


def _project_scaled(model: RankModel, points: np.ndarray) -> np.ndarray:
    """Barycentric projection of already-scaled points (log-domain softmax)."""
    if points.shape[0] <= _PROJECTION_CHUNK:
        return _project_block(model, points)
    blocks = [
        _project_block(model, points[start : start + _PROJECTION_CHUNK])
        for start in range(0, points.shape[0], _PROJECTION_CHUNK)
    ]
    return np.vstack(blocks)


def project(model: RankModel, query: ScoreMatrix) -> np.ndarray:
    """Rank vectors for each query row: convex combinations of reference atoms."""
    if query.n_measures != model.n_measures:
        raise ValueError(
            f"query has {query.n_measures} columns but the model expects {model.n_measures}"
        )
    scaled = apply_scaler(model.scaler, query).values
    return _project_scaled(model, scaled)


def rank_score(model: RankModel, query: ScoreMatrix) -> np.ndarray:
    """Scalar uncertainty per query row: Euclidean norm of the rank vector."""
    return np.linalg.norm(project(model, query), axis=1)
