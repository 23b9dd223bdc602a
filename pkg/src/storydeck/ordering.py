"""Minimum-transition-cost sequencing of facts and slides.

The objective is an open path: find the permutation minimizing the sum of
pairwise costs between adjacent items, subject to relative-order constraints
on pinned items.  Costs are asymmetric by construction (a drill-down is
cheaper than the reverse roll-up), so nothing here assumes cost(a, b) ==
cost(b, a).

Up to EXACT_LIMIT items the solver is an exact Held-Karp dynamic program
over subsets; beyond that it falls back to cheapest-insertion.  The DP inner
loop is the one hot kernel in the package: it is compiled with numba when
available, with a pure-numpy fallback selected by the STORYDECK_DISABLE_NUMBA
environment variable (any non-empty value disables the JIT).
"""

from __future__ import annotations

import os
from typing import Callable, Sequence, TypeVar

import numpy as np

EXACT_LIMIT = 12

# Tiny per-inversion penalty: among equal-cost orderings the DP prefers the
# one closest to the input order, which keeps all-zero-cost inputs stable.
_STABILITY_EPS = 1e-9

T = TypeVar("T")


def _held_karp_kernel(cost: np.ndarray, pred_mask: np.ndarray) -> np.ndarray:
    """Exact open-path DP over subsets with precedence constraints.

    ``pred_mask[i]`` is a bitmask of items that must appear before item i.
    Returns the optimal order as an index array.
    """
    n = cost.shape[0]
    full = (1 << n) - 1
    inf = np.inf
    dp = np.full((full + 1, n), inf, dtype=np.float64)
    parent = np.full((full + 1, n), -1, dtype=np.int64)

    for i in range(n):
        if pred_mask[i] == 0:
            dp[1 << i, i] = 0.0

    for mask in range(1, full + 1):
        for last in range(n):
            base = dp[mask, last]
            if base == inf or (mask >> last) & 1 == 0:
                continue
            for nxt in range(n):
                if (mask >> nxt) & 1:
                    continue
                if (pred_mask[nxt] & mask) != pred_mask[nxt]:
                    continue
                new_mask = mask | (1 << nxt)
                candidate = base + cost[last, nxt]
                if candidate < dp[new_mask, nxt]:
                    dp[new_mask, nxt] = candidate
                    parent[new_mask, nxt] = last

    best_last = 0
    best_cost = inf
    for last in range(n):
        if dp[full, last] < best_cost:
            best_cost = dp[full, last]
            best_last = last

    order = np.empty(n, dtype=np.int64)
    mask = full
    last = best_last
    for pos in range(n - 1, -1, -1):
        order[pos] = last
        prev = parent[mask, last]
        mask ^= 1 << last
        last = prev
    return order


def _jit_enabled() -> bool:
    return not os.environ.get("STORYDECK_DISABLE_NUMBA")


if _jit_enabled():
    try:
        from numba import njit

        _held_karp = njit(cache=True)(_held_karp_kernel)
        JIT_ACTIVE = True
    except ImportError:  # pragma: no cover - numba is an optional extra
        _held_karp = _held_karp_kernel
        JIT_ACTIVE = False
else:
    _held_karp = _held_karp_kernel
    JIT_ACTIVE = False


def _sequence_cost(order: Sequence[int], cost: np.ndarray) -> float:
    return float(sum(cost[a, b] for a, b in zip(order, order[1:])))


def _pred_masks(n: int, pinned: Sequence[int]) -> np.ndarray:
    masks = np.zeros(n, dtype=np.int64)
    acc = 0
    for i in pinned:
        masks[i] = acc
        acc |= 1 << i
    return masks


def _greedy_insertion(cost: np.ndarray, pinned: Sequence[int]) -> list[int]:
    """Cheapest-insertion: seed with the pinned chain (or the first item) and
    insert the remaining items, in input order, at the cheapest legal gap."""
    n = cost.shape[0]
    pinned = list(pinned)
    rest = [i for i in range(n) if i not in set(pinned)]
    if pinned:
        sequence = list(pinned)
    else:
        sequence = [rest.pop(0)]
    for item in rest:
        best_pos, best_delta = 0, np.inf
        for pos in range(len(sequence) + 1):
            delta = 0.0
            if pos > 0:
                delta += cost[sequence[pos - 1], item]
            if pos < len(sequence):
                delta += cost[item, sequence[pos]]
            if 0 < pos < len(sequence):
                delta -= cost[sequence[pos - 1], sequence[pos]]
            if delta < best_delta:
                best_delta = delta
                best_pos = pos
        sequence.insert(best_pos, item)
    return sequence


def order_indices(cost: np.ndarray, pinned: Sequence[int] = ()) -> list[int]:
    """Order item indices by minimum total adjacent cost.

    ``pinned`` lists indices whose relative order must be preserved, in that
    order.  Exact for up to EXACT_LIMIT items, cheapest-insertion beyond.
    """
    n = cost.shape[0]
    if n == 0:
        return []
    if n == 1:
        return [0]
    if n > EXACT_LIMIT:
        return _greedy_insertion(cost, pinned)
    scale = float(np.max(np.abs(cost))) or 1.0
    eps = _STABILITY_EPS * scale
    perturbed = cost.astype(np.float64).copy()
    for i in range(n):
        for j in range(n):
            if j < i:
                perturbed[i, j] += eps
    order = _held_karp(perturbed, _pred_masks(n, pinned))
    return [int(i) for i in order]


def order_sequence(
    items: Sequence[T],
    pairwise_cost: Callable[[T, T], float],
    pinned: Sequence[T] = (),
) -> list[T]:
    """Order ``items`` minimizing the sum of adjacent transition costs.

    ``pinned`` items keep their relative order.  Stable: among equal-cost
    orders the one closest to the input order wins.
    """
    n = len(items)
    if n <= 1:
        return list(items)
    cost = np.empty((n, n), dtype=np.float64)
    for i, a in enumerate(items):
        for j, b in enumerate(items):
            cost[i, j] = 0.0 if i == j else pairwise_cost(a, b)
    pinned_idx = []
    for p in pinned:
        pinned_idx.append(
            next(i for i, item in enumerate(items) if item is p or item == p)
        )
    order = order_indices(cost, pinned_idx)
    return [items[i] for i in order]


def total_cost(items: Sequence[T], pairwise_cost: Callable[[T, T], float]) -> float:
    return sum(pairwise_cost(a, b) for a, b in zip(items, items[1:]))
