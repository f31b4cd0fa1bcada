"""Log-domain Sinkhorn solver for entropy-regularized discrete couplings.

All updates run on log scalings via log-sum-exp, so widely disparate cost
magnitudes (e.g. anchor rows far from every target atom) cannot produce
overflow or NaN the way plain kernel scaling does.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import NumericalError
from .reference import ReferenceCloud
from .scores import _readonly

DEFAULT_EPSILON = 0.5
DEFAULT_MAX_ITERS = 10000
DEFAULT_TOL = 1e-6


def cost_matrix(source, target) -> np.ndarray:
    """Pairwise squared Euclidean distances, p x q."""
    source = np.asarray(source, dtype=float)
    target = np.asarray(target, dtype=float)
    if source.ndim != 2 or target.ndim != 2:
        raise ValueError("source and target must be 2-d point arrays")
    if source.shape[1] != target.shape[1]:
        raise ValueError(
            f"source has {source.shape[1]} columns but target has {target.shape[1]}"
        )
    diff = source[:, None, :] - target[None, :, :]
    return np.einsum("pqm,pqm->pq", diff, diff)


@dataclass(frozen=True)
class Coupling:
    """Fitted plan in scaling form: P_ij = exp(log_u_i - C_ij/eps + log_v_j)."""

    epsilon: float
    source_atoms: np.ndarray
    source_weights: np.ndarray
    target_atoms: np.ndarray
    target_weights: np.ndarray
    log_u: np.ndarray
    log_v: np.ndarray
    iterations_run: int
    marginal_residual: float

    def __post_init__(self):
        if not (self.epsilon > 0):
            raise ValueError("epsilon must be positive")
        for name in ("source_atoms", "source_weights", "target_atoms",
                     "target_weights", "log_u", "log_v"):
            object.__setattr__(self, name, _readonly(getattr(self, name)))
        p = self.source_atoms.shape[0]
        q = self.target_atoms.shape[0]
        if self.source_weights.shape != (p,) or self.log_u.shape != (p,):
            raise ValueError("source weights and log_u must have one entry per source atom")
        if self.target_weights.shape != (q,) or self.log_v.shape != (q,):
            raise ValueError("target weights and log_v must have one entry per target atom")

    @property
    def n_source(self) -> int:
        return self.source_atoms.shape[0]

    @property
    def n_target(self) -> int:
        return self.target_atoms.shape[0]

    def log_plan(self) -> np.ndarray:
        logK = -cost_matrix(self.source_atoms, self.target_atoms) / self.epsilon
        return self.log_u[:, None] + logK + self.log_v[None, :]

    def plan(self) -> np.ndarray:
        return np.exp(self.log_plan())


def _check_weights(weights, n: int, side: str) -> np.ndarray:
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (n,):
        raise ValueError(f"{side} weights must have shape ({n},), got {weights.shape}")
    if (weights <= 0).any():
        raise ValueError(f"{side} weights must all be positive")
    if abs(weights.sum() - 1.0) > 1e-9:
        raise ValueError(f"{side} weights must sum to 1")
    return weights


def _residual(logK, log_u, log_v, a, b) -> float:
    plan = np.exp(log_u[:, None] + logK + log_v[None, :])
    row_err = np.abs(plan.sum(axis=1) - a).sum()
    col_err = np.abs(plan.sum(axis=0) - b).sum()
    return float(max(row_err, col_err))


def fit_coupling(
    source_atoms,
    source_weights,
    reference: ReferenceCloud,
    epsilon: float = DEFAULT_EPSILON,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
) -> Coupling:
    """Fit the entropy-regularized coupling between two weighted clouds.

    Alternates log-sum-exp updates of the dual scalings until the larger of
    the two L1 marginal errors drops to ``tol`` or ``max_iters`` is reached.
    Hitting the cap is recorded (iterations_run == max_iters and a residual
    above tol), not raised; orderings downstream often survive loose
    convergence and callers decide how to react.
    """
    source_atoms = np.asarray(source_atoms, dtype=float)
    if source_atoms.ndim != 2:
        raise ValueError("source atoms must be a 2-d array")
    if not (epsilon > 0):
        raise ValueError("epsilon must be positive")
    if not (tol > 0):
        raise ValueError("tol must be positive")
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    p = source_atoms.shape[0]
    a = _check_weights(source_weights, p, "source")
    b = _check_weights(reference.weights, reference.n_atoms, "target")

    cost = cost_matrix(source_atoms, reference.atoms)
    if not np.isfinite(cost).all():
        raise NumericalError("cost matrix contains non-finite entries")
    logK = -cost / epsilon
    log_a = np.log(a)
    log_b = np.log(b)

    log_u = np.zeros(p)
    log_v = np.zeros(reference.n_atoms)
    iterations = 0
    residual = np.inf
    for iterations in range(1, max_iters + 1):
        log_u = log_a - logsumexp(logK + log_v[None, :], axis=1)
        log_v = log_b - logsumexp(logK + log_u[:, None], axis=0)
        residual = _residual(logK, log_u, log_v, a, b)
        if not np.isfinite(residual):
            raise NumericalError("marginal residual became non-finite")
        if residual <= tol:
            break

    return Coupling(
        epsilon=epsilon,
        source_atoms=source_atoms,
        source_weights=a,
        target_atoms=reference.atoms,
        target_weights=b,
        log_u=log_u,
        log_v=log_v,
        iterations_run=iterations,
        marginal_residual=residual,
    )
