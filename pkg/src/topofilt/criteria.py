"""Density-link criterion.

A point ``x`` is linked to ``y`` at threshold ``t`` when

    max(d(x, y), lam * (s(x) - s(y))) <= t

where ``s`` is the k-nearest-neighbour sparsity (distance to the k-th
nearest other point).  ``lam = 0`` is plain single linkage; ``lam > 0``
places denser points below sparser ones within reach ``t``.

If ``d'`` is within ``eps`` of ``d`` in sup norm then every ``s(x)`` moves by
at most ``eps`` too, so the gap term moves by at most ``2 * lam * eps`` and
the cost by at most ``max(1, 2 * lam) * eps``.  That factor is
:func:`lipschitz_constant`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import KOutOfRange, ValidationError
from .metric import DistanceMatrix


@dataclass(frozen=True)
class CriterionConfig:
    k: int = 2
    lam: float = 2.0

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise KOutOfRange(f"k must be an integer >= 1, got {self.k!r}")
        if not self.lam >= 0:
            raise ValidationError(f"lambda must be >= 0, got {self.lam!r}")


@dataclass(frozen=True, eq=False)
class StepRelation:
    t: float
    pairs: np.ndarray  # bool (n, n); pairs[x, y] means x -> y

    def __eq__(self, other):
        return isinstance(other, StepRelation) and self.t == other.t and np.array_equal(self.pairs, other.pairs)


def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= max(n - 1, 0):
        raise KOutOfRange(f"k={k} outside [1, {n - 1}] for {n} points")


def knn_sparsity(D: DistanceMatrix, k: int) -> np.ndarray:
    n = D.n
    _check_k(n, k)
    a = D.entries.copy()
    np.fill_diagonal(a, np.inf)
    return np.sort(a, axis=1)[:, k - 1]


def cost_matrix(D: DistanceMatrix, config: CriterionConfig) -> np.ndarray:
    """All link costs at once; entry (x, y) is ``link_cost(x, y)``.

    The sparsity term needs ``k <= n - 1`` only when ``lam > 0`` and there is
    more than one point.
    """
    n = D.n
    d = np.array(D.entries, dtype=float)
    if n == 1 or config.lam == 0:
        cost = d
    else:
        s = knn_sparsity(D, config.k)
        cost = np.maximum(d, config.lam * (s[:, None] - s[None, :]))
    np.fill_diagonal(cost, 0.0)
    return cost


def link_cost(D: DistanceMatrix, s: np.ndarray, lam: float, x: int, y: int) -> float:
    if x == y:
        return 0.0
    d = float(D.entries[x, y])
    if lam == 0:
        return d
    return max(d, lam * (float(s[x]) - float(s[y])))


def step_relation(D: DistanceMatrix, config: CriterionConfig, t: float, cost: np.ndarray | None = None) -> StepRelation:
    if cost is None:
        cost = cost_matrix(D, config)
    pairs = cost <= t
    np.fill_diagonal(pairs, True)
    return StepRelation(float(t), pairs)


def critical_thresholds(D: DistanceMatrix, config: CriterionConfig, cost: np.ndarray | None = None) -> np.ndarray:
    """Sorted grid ``0 = t_0 < t_1 < ...`` of values where the relation changes."""
    if cost is None:
        cost = cost_matrix(D, config)
    vals = np.unique(cost[np.isfinite(cost) & (cost > 0)])
    return np.concatenate([[0.0], vals])


def lipschitz_constant(config: CriterionConfig) -> float:
    return max(1.0, 2.0 * config.lam)
