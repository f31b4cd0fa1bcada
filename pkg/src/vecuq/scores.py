"""Score containers and the min-max scaling applied before the transport fit.

Uncertainty measures arrive as nonnegative per-sample scores, one column per
measure.  Scaling maps them into a common working range; query vectors are
transformed with the calibration parameters and never clipped, so scores
outside the calibration range keep their out-of-range signal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FEATURE_WISE = "featurewise"
GLOBAL = "global"
IDENTITY = "identity"
SCALING_KINDS = (FEATURE_WISE, GLOBAL, IDENTITY)


def _readonly(values) -> np.ndarray:
    # fixed C layout keeps reductions bit-reproducible across construction paths
    out = np.array(values, dtype=float, order="C")
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class ScoreMatrix:
    """n x m matrix of uncertainty scores, one label per column.

    Entries must be finite.  Nonnegativity is enforced at the ingestion
    points (:func:`stack` and the CSV reader), not here, because scaled
    working matrices produced by :func:`apply_scaler` may legitimately leave
    [0, 1] for out-of-calibration queries.
    """

    values: np.ndarray
    measure_names: tuple[str, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError(f"expected a 2-d score matrix, got shape {values.shape}")
        n, m = values.shape
        if n < 1 or m < 1:
            raise ValueError(f"score matrix must be at least 1x1, got {n}x{m}")
        if not np.isfinite(values).all():
            raise ValueError("score matrix contains non-finite entries")
        names = tuple(str(name) for name in self.measure_names)
        if len(names) != m:
            raise ValueError(f"got {len(names)} measure names for {m} columns")
        object.__setattr__(self, "values", _readonly(values))
        object.__setattr__(self, "measure_names", names)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_measures(self) -> int:
        return self.values.shape[1]


def stack(columns, names) -> ScoreMatrix:
    """Stack per-measure score vectors into a ScoreMatrix, one column each.

    Every column must have the same length and contain only finite,
    nonnegative values; violations report the offending column index.
    """
    columns = list(columns)
    names = list(names)
    if len(columns) != len(names):
        raise ValueError(f"{len(columns)} columns but {len(names)} names")
    if not columns:
        raise ValueError("at least one score column is required")
    length = None
    stacked = []
    for j, column in enumerate(columns):
        arr = np.asarray(column, dtype=float)
        if arr.ndim != 1:
            raise ValueError(f"column {j} is not one-dimensional")
        if length is None:
            length = arr.size
        elif arr.size != length:
            raise ValueError(f"column {j} has length {arr.size}, expected {length}")
        if not np.isfinite(arr).all():
            raise ValueError(f"column {j} contains non-finite entries")
        if (arr < 0).any():
            raise ValueError(f"column {j} contains negative scores")
        stacked.append(arr)
    if length == 0:
        raise ValueError("score columns must contain at least one sample")
    return ScoreMatrix(np.column_stack(stacked), tuple(names))


@dataclass(frozen=True)
class Scaler:
    """Fitted min-max parameters; ``kind`` is one of SCALING_KINDS."""

    kind: str
    mins: np.ndarray
    maxes: np.ndarray

    def __post_init__(self):
        if self.kind not in SCALING_KINDS:
            raise ValueError(f"unknown scaling kind {self.kind!r}, expected one of {SCALING_KINDS}")
        mins = np.asarray(self.mins, dtype=float)
        maxes = np.asarray(self.maxes, dtype=float)
        if mins.ndim != 1 or mins.shape != maxes.shape:
            raise ValueError("mins and maxes must be 1-d arrays of equal length")
        if (mins > maxes).any():
            raise ValueError("scaler requires mins <= maxes")
        object.__setattr__(self, "mins", _readonly(mins))
        object.__setattr__(self, "maxes", _readonly(maxes))

    @property
    def n_measures(self) -> int:
        return self.mins.size


def fit_scaler(kind: str, data: ScoreMatrix) -> Scaler:
    """Fit min-max parameters: per column, one global pair, or a no-op."""
    if kind not in SCALING_KINDS:
        raise ValueError(f"unknown scaling kind {kind!r}, expected one of {SCALING_KINDS}")
    m = data.n_measures
    if kind == FEATURE_WISE:
        mins = data.values.min(axis=0)
        maxes = data.values.max(axis=0)
    elif kind == GLOBAL:
        mins = np.full(m, data.values.min())
        maxes = np.full(m, data.values.max())
    else:
        mins = np.zeros(m)
        maxes = np.ones(m)
    return Scaler(kind, mins, maxes)


def apply_scaler(scaler: Scaler, data: ScoreMatrix) -> ScoreMatrix:
    """Map entries to (x - min) / (max - min), without clipping.

    Constant columns (max == min) map to zero.  Identity scalers return the
    input unchanged.
    """
    if data.n_measures != scaler.n_measures:
        raise ValueError(
            f"data has {data.n_measures} columns but scaler expects {scaler.n_measures}"
        )
    if scaler.kind == IDENTITY:
        return data
    span = scaler.maxes - scaler.mins
    safe = np.where(span > 0, span, 1.0)
    scaled = (data.values - scaler.mins) / safe
    scaled[:, span == 0] = 0.0
    return ScoreMatrix(scaled, data.measure_names)
