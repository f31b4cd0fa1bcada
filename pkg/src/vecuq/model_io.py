"""File formats: score/label CSVs and the versioned JSON model file.

Floats are serialized with ``repr`` (shortest round-trip form), so a model
saved and reloaded scores queries bit-identically and numeric CSV output
survives reparsing exactly.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .rank import AnchorConfig, RankModel
from .reference import Beta, Exponential, ReferenceCloud
from .scores import Scaler
from .sinkhorn import Coupling

FORMAT_VERSION = 1


def _parse_float(token: str, path, line_no: int, col: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ValueError(
            f"{path} line {line_no}: column {col!r} has non-numeric value {token!r}"
        ) from None
    if not np.isfinite(value):
        raise ValueError(f"{path} line {line_no}: column {col!r} is not finite")
    return value


def read_scores_csv(path, require_nonnegative: bool = True):
    """Read a header + numeric rows CSV; returns (names, values array).

    The value array may have zero rows (header-only file); callers decide
    whether that is acceptable.
    """
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: file is empty") from None
        names = [name.strip() for name in header]
        if any(not name for name in names):
            raise ValueError(f"{path}: header contains an empty column name")
        if all(_is_number(name) for name in names):
            raise ValueError(f"{path}: missing header row of measure names")
        if len(set(names)) != len(names):
            raise ValueError(f"{path}: duplicate column names in header")
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(names):
                raise ValueError(
                    f"{path} line {line_no}: expected {len(names)} fields, got {len(row)}"
                )
            values = [
                _parse_float(token.strip(), path, line_no, names[j])
                for j, token in enumerate(row)
            ]
            if require_nonnegative and any(v < 0 for v in values):
                bad = names[[v < 0 for v in values].index(True)]
                raise ValueError(f"{path} line {line_no}: negative score in column {bad!r}")
            rows.append(values)
    values = np.array(rows, dtype=float) if rows else np.empty((0, len(names)))
    return tuple(names), values


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def read_labels_csv(path) -> np.ndarray:
    """Read the single-column label file (header must be ``label``)."""
    names, values = read_scores_csv(path, require_nonnegative=False)
    if names != ("label",):
        raise ValueError(f"{path}: expected a single column with header 'label'")
    return values[:, 0]


def write_ranks_csv(path, scores) -> None:
    """Write (index, rank_score) rows with round-trip float formatting."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["index", "rank_score"])
        for i, value in enumerate(np.asarray(scores, dtype=float)):
            writer.writerow([i, repr(float(value))])


def write_scores_csv(path, names, columns) -> None:
    """Write named score columns with round-trip float formatting."""
    arrays = [np.asarray(c, dtype=float) for c in columns]
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(list(names))
        for row in zip(*arrays):
            writer.writerow([repr(float(v)) for v in row])


def _family_payload(family) -> dict:
    if isinstance(family, Exponential):
        return {"name": "exponential", "rate": family.rate}
    return {"name": "beta", "alpha": family.alpha, "beta": family.beta}


def _family_from_payload(payload: dict):
    if payload["name"] == "exponential":
        return Exponential(payload["rate"])
    if payload["name"] == "beta":
        return Beta(payload["alpha"], payload["beta"])
    raise ValueError(f"unknown reference family {payload['name']!r}")


def save_model(model: RankModel, path) -> None:
    coupling = model.coupling
    payload = {
        "format_version": FORMAT_VERSION,
        "measure_names": list(model.measure_names),
        "epsilon": model.epsilon,
        "gamma": model.anchor_config.gamma,
        "scaler": {
            "kind": model.scaler.kind,
            "mins": model.scaler.mins.tolist(),
            "maxes": model.scaler.maxes.tolist(),
        },
        "reference": {
            "family": _family_payload(model.reference_family),
            "atoms": model.reference.atoms.tolist(),
            "weights": model.reference.weights.tolist(),
        },
        "source_atoms": coupling.source_atoms.tolist(),
        "log_u": coupling.log_u.tolist(),
        "log_v": coupling.log_v.tolist(),
        "fit": {
            "iterations_run": coupling.iterations_run,
            "marginal_residual": coupling.marginal_residual,
        },
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=1)
        handle.write("\n")


def load_model(path) -> RankModel:
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported model format version {version!r}")
    scaler = Scaler(
        payload["scaler"]["kind"],
        np.array(payload["scaler"]["mins"], dtype=float),
        np.array(payload["scaler"]["maxes"], dtype=float),
    )
    reference = ReferenceCloud(
        np.array(payload["reference"]["atoms"], dtype=float),
        np.array(payload["reference"]["weights"], dtype=float),
    )
    source_atoms = np.array(payload["source_atoms"], dtype=float)
    p = source_atoms.shape[0]
    coupling = Coupling(
        epsilon=payload["epsilon"],
        source_atoms=source_atoms,
        source_weights=np.full(p, 1.0 / p),
        target_atoms=reference.atoms,
        target_weights=reference.weights,
        log_u=np.array(payload["log_u"], dtype=float),
        log_v=np.array(payload["log_v"], dtype=float),
        iterations_run=int(payload["fit"]["iterations_run"]),
        marginal_residual=float(payload["fit"]["marginal_residual"]),
    )
    return RankModel(
        scaler=scaler,
        anchor_config=AnchorConfig(payload["gamma"]),
        reference=reference,
        coupling=coupling,
        measure_names=tuple(payload["measure_names"]),
        epsilon=float(payload["epsilon"]),
        reference_family=_family_from_payload(payload["reference"]["family"]),
    )
