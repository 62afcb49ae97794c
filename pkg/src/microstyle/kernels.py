"""Exact min-cost transportation kernel behind Word Mover's Distance.

Solves min sum(flow * cost) subject to row sums = supply and column sums =
demand (balanced masses, flow >= 0) by successive shortest augmenting paths
over the residual bipartite graph, with Bellman-Ford for path finding. Two
interchangeable implementations share the algorithm: a scalar-loop version
compiled with numba when available, and a vectorized numpy version. Set
MICROSTYLE_NO_NUMBA=1 to force the numpy path (also used automatically when
numba is not installed).
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag instead
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap

ENV_FLAG = "MICROSTYLE_NO_NUMBA"

# Masses below this are considered exhausted; relaxations must beat the
# incumbent distance by more than _EPS_IMPROVE to count as progress.
_EPS_MASS = 1e-12
_EPS_IMPROVE = 1e-15
_INF = np.inf


@njit(cache=True)
def _transport_cost_loops(supply, demand, cost):
    n_a = supply.shape[0]
    n_b = demand.shape[0]
    flow = np.zeros((n_a, n_b))
    surplus = supply.copy()
    deficit = demand.copy()

    max_augments = 8 * (n_a + n_b) * (n_a + n_b) + 64
    for _ in range(max_augments):
        remaining = 0.0
        for j in range(n_b):
            remaining += deficit[j]
        if remaining <= _EPS_MASS:
            total = 0.0
            for i in range(n_a):
                for j in range(n_b):
                    total += flow[i, j] * cost[i, j]
            return total

        # Bellman-Ford from all surplus nodes over the residual graph.
        dist_a = np.empty(n_a)
        parent_a = np.full(n_a, -1, dtype=np.int64)
        for i in range(n_a):
            dist_a[i] = 0.0 if surplus[i] > _EPS_MASS else _INF
        dist_b = np.full(n_b, _INF)
        parent_b = np.full(n_b, -1, dtype=np.int64)
        for _round in range(n_a + n_b):
            changed = False
            for i in range(n_a):
                if dist_a[i] < _INF:
                    for j in range(n_b):
                        nd = dist_a[i] + cost[i, j]
                        if nd < dist_b[j] - _EPS_IMPROVE:
                            dist_b[j] = nd
                            parent_b[j] = i
                            changed = True
            for j in range(n_b):
                if dist_b[j] < _INF:
                    for i in range(n_a):
                        if flow[i, j] > _EPS_MASS:
                            nd = dist_b[j] - cost[i, j]
                            if nd < dist_a[i] - _EPS_IMPROVE:
                                dist_a[i] = nd
                                parent_a[i] = j
                                changed = True
            if not changed:
                break

        best_j = -1
        best_dist = _INF
        for j in range(n_b):
            if deficit[j] > _EPS_MASS and dist_b[j] < best_dist:
                best_dist = dist_b[j]
                best_j = j
        if best_j < 0:
            break  # no residual path: masses unbalanced beyond tolerance

        # Trace back to a surplus node for the bottleneck, then augment.
        bottleneck = deficit[best_j]
        j = best_j
        while True:
            i = parent_b[j]
            if parent_a[i] < 0:
                if surplus[i] < bottleneck:
                    bottleneck = surplus[i]
                break
            j = parent_a[i]
            if flow[i, j] < bottleneck:
                bottleneck = flow[i, j]
        j = best_j
        while True:
            i = parent_b[j]
            flow[i, j] += bottleneck
            if parent_a[i] < 0:
                surplus[i] -= bottleneck
                break
            j = parent_a[i]
            flow[i, j] -= bottleneck
        deficit[best_j] -= bottleneck

    raise RuntimeError("transportation solver failed to converge")


def _transport_cost_numpy(supply, demand, cost):
    n_a = supply.shape[0]
    n_b = demand.shape[0]
    flow = np.zeros((n_a, n_b))
    surplus = supply.copy()
    deficit = demand.copy()

    max_augments = 8 * (n_a + n_b) * (n_a + n_b) + 64
    for _ in range(max_augments):
        if deficit.sum() <= _EPS_MASS:
            return float((flow * cost).sum())

        dist_a = np.where(surplus > _EPS_MASS, 0.0, _INF)
        parent_a = np.full(n_a, -1, dtype=np.int64)
        dist_b = np.full(n_b, _INF)
        parent_b = np.full(n_b, -1, dtype=np.int64)
        for _round in range(n_a + n_b):
            forward = dist_a[:, None] + cost
            cand_b = forward.min(axis=0)
            improve_b = cand_b < dist_b - _EPS_IMPROVE
            dist_b = np.where(improve_b, cand_b, dist_b)
            parent_b = np.where(improve_b, forward.argmin(axis=0), parent_b)

            backward = np.where(flow > _EPS_MASS, dist_b[None, :] - cost, _INF)
            cand_a = backward.min(axis=1)
            improve_a = cand_a < dist_a - _EPS_IMPROVE
            dist_a = np.where(improve_a, cand_a, dist_a)
            parent_a = np.where(improve_a, backward.argmin(axis=1), parent_a)
            if not improve_b.any() and not improve_a.any():
                break

        reachable = np.where(deficit > _EPS_MASS, dist_b, _INF)
        best_j = int(reachable.argmin())
        if not np.isfinite(reachable[best_j]):
            break

        bottleneck = deficit[best_j]
        j = best_j
        while True:
            i = parent_b[j]
            if parent_a[i] < 0:
                bottleneck = min(bottleneck, surplus[i])
                break
            j = parent_a[i]
            bottleneck = min(bottleneck, flow[i, j])
        j = best_j
        while True:
            i = parent_b[j]
            flow[i, j] += bottleneck
            if parent_a[i] < 0:
                surplus[i] -= bottleneck
                break
            j = parent_a[i]
            flow[i, j] -= bottleneck
        deficit[best_j] -= bottleneck

    raise RuntimeError("transportation solver failed to converge")


def use_numba() -> bool:
    """Whether the jitted kernel is active (numba present and not disabled)."""
    return HAS_NUMBA and os.environ.get(ENV_FLAG, "") != "1"


def transport_cost(supply: np.ndarray, demand: np.ndarray, cost: np.ndarray) -> float:
    """Minimum total cost moving ``supply`` onto ``demand`` under ``cost``.

    Masses must balance: abs(sum(supply) - sum(demand)) <= 1e-9.
    """
    supply = np.ascontiguousarray(supply, dtype=np.float64)
    demand = np.ascontiguousarray(demand, dtype=np.float64)
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    if cost.shape != (supply.shape[0], demand.shape[0]):
        raise ValueError(f"cost shape {cost.shape} does not match "
                         f"({supply.shape[0]}, {demand.shape[0]})")
    if abs(float(supply.sum()) - float(demand.sum())) > 1e-9:
        raise ValueError("supply and demand masses must balance")
    if use_numba():
        return float(_transport_cost_loops(supply, demand, cost))
    return _transport_cost_numpy(supply, demand, cost)
