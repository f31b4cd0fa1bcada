"""Discrete reference clouds approximating an isotropic product target.

Atoms come from a Cartesian midpoint grid on the unit hypercube pushed
through the marginal inverse CDF (exponential or beta), with uniform
weights.  Midpoints keep every grid coordinate strictly inside (0, 1), so
the exponential inverse CDF never diverges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .scores import _readonly

# Hard cap on grid size: the full Cartesian product is kept, so k**m atoms
# must stay addressable in memory.
MAX_GRID_ATOMS = 4_194_304

_BETA_BISECTIONS = 50  # interval shrinks to 2**-50 < 1e-10 absolute


@dataclass(frozen=True)
class Exponential:
    """Product-of-exponentials marginal with a common rate."""

    rate: float = 1.0

    def __post_init__(self):
        if not (self.rate > 0):
            raise ValueError("exponential rate must be positive")


@dataclass(frozen=True)
class Beta:
    """Product-of-betas marginal with common shape parameters."""

    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("beta shape parameters must be positive")


@dataclass(frozen=True)
class ReferenceSpec:
    family: Exponential | Beta
    dimension: int
    atom_budget: int

    def __post_init__(self):
        if not isinstance(self.family, (Exponential, Beta)):
            raise ValueError(f"unsupported reference family {self.family!r}")
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")
        if self.atom_budget < 1:
            raise ValueError("atom budget must be at least 1")


@dataclass(frozen=True)
class ReferenceCloud:
    """Target atoms (q x m) with strictly positive weights summing to one."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if atoms.ndim != 2:
            raise ValueError(f"atoms must be 2-d, got shape {atoms.shape}")
        if weights.ndim != 1 or weights.size != atoms.shape[0]:
            raise ValueError("weights must be 1-d with one entry per atom")
        if not np.isfinite(atoms).all():
            raise ValueError("atoms contain non-finite entries")
        if (weights <= 0).any():
            raise ValueError("all atom weights must be positive")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError("atom weights must sum to 1 within 1e-12")
        object.__setattr__(self, "atoms", _readonly(atoms))
        object.__setattr__(self, "weights", _readonly(weights))

    @property
    def n_atoms(self) -> int:
        return self.atoms.shape[0]

    @property
    def dimension(self) -> int:
        return self.atoms.shape[1]


def _axis_count(dimension: int, budget: int) -> int:
    """Smallest k with k**dimension >= budget (exact integer arithmetic)."""
    k = max(1, round(budget ** (1.0 / dimension)))
    while k**dimension < budget:
        k += 1
    while k > 1 and (k - 1) ** dimension >= budget:
        k -= 1
    return k


def unit_grid(dimension: int, budget: int) -> np.ndarray:
    """Cartesian midpoint grid in (0, 1)**dimension with at least ``budget`` points.

    Uses k points per axis, k the smallest integer with k**dimension >=
    budget, at midpoints (i + 0.5) / k.  Returns the full product, so the
    result has k**dimension rows.
    """
    if dimension < 1:
        raise ValueError("dimension must be at least 1")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    k = _axis_count(dimension, budget)
    total = k**dimension
    if total > MAX_GRID_ATOMS:
        raise ValueError(
            f"grid of {k}^{dimension} = {total} atoms exceeds the cap of "
            f"{MAX_GRID_ATOMS}; lower the atom budget or the dimension"
        )
    axis = (np.arange(k) + 0.5) / k
    mesh = np.meshgrid(*([axis] * dimension), indexing="ij")
    return np.stack(mesh, axis=-1).reshape(total, dimension)


def inverse_cdf(family, u):
    """Marginal quantile function, elementwise over ``u`` in (0, 1).

    Exponential uses the closed form -log(1 - u) / rate.  Beta inverts the
    regularized incomplete beta CDF by bisection to absolute tolerance
    better than 1e-10 (closed form for alpha = beta = 1).
    """
    arr = np.asarray(u, dtype=float)
    scalar = arr.ndim == 0
    if ((arr <= 0) | (arr >= 1)).any():
        raise ValueError("u must lie strictly inside (0, 1)")
    if isinstance(family, Exponential):
        out = -np.log1p(-arr) / family.rate
    elif isinstance(family, Beta):
        if family.alpha == 1.0 and family.beta == 1.0:
            out = arr.copy()
        else:
            out = _beta_inverse(family.alpha, family.beta, arr)
    else:
        raise ValueError(f"unsupported reference family {family!r}")
    return float(out) if scalar else out


def _beta_inverse(alpha: float, beta: float, u: np.ndarray) -> np.ndarray:
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    for _ in range(_BETA_BISECTIONS):
        mid = 0.5 * (lo + hi)
        below = betainc(alpha, beta, mid) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def sample_reference(spec: ReferenceSpec) -> ReferenceCloud:
    """Build the discrete target: transformed grid atoms, uniform weights."""
    grid = unit_grid(spec.dimension, spec.atom_budget)
    atoms = inverse_cdf(spec.family, grid)
    q = atoms.shape[0]
    return ReferenceCloud(atoms, np.full(q, 1.0 / q))
