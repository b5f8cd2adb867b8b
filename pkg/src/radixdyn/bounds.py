"""Numeric a-priori bounds for contractive series sum N^-i d_i.

These only ever enlarge search regions, so float error is absorbed by a
safety factor instead of exact arithmetic.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .linalg import IntMatrix

DEFAULT_CELL_BUDGET = 4_000_000
SAFETY = 1.001


class ResourceBudgetError(RuntimeError):
    def __init__(self, message: str, needed: int, budget: int):
        super().__init__(message)
        self.needed = needed
        self.budget = budget


def cell_budget(budget: int | None = None) -> int:
    if budget is not None:
        if budget <= 0:
            raise ValueError("budget must be positive")
        return budget
    env = os.environ.get("RADIXDYN_BUDGET")
    return int(env) if env else DEFAULT_CELL_BUDGET


def check_budget(needed: int, budget: int | None, what: str) -> None:
    limit = cell_budget(budget)
    if needed > limit:
        raise ResourceBudgetError(
            f"{what} needs {needed} cells but the budget is {limit}; "
            "raise --budget-cells or RADIXDYN_BUDGET, or pass a smaller radius/depth",
            needed, limit)


def _inverse_power_norms(m: IntMatrix, count: int) -> list[float]:
    inv = np.linalg.inv(np.array(m, dtype=float))
    out = []
    p = np.eye(len(m))
    for _ in range(count):
        p = p @ inv
        out.append(float(np.abs(p).sum(axis=1).max()))
    return out


def inverse_tail_sum(m: IntMatrix, start: int = 0, max_block: int = 4096) -> float:
    """Upper bound for sum_{i > start} ||N^-i|| in the sup norm.

    Picks K with q = ||N^-K|| <= 1/2; submultiplicativity then bounds the
    tail by (block of K terms) / (1 - q).
    """
    norms = _inverse_power_norms(m, max_block)
    k = next((i + 1 for i, v in enumerate(norms) if v <= 0.5), None)
    if k is None:
        raise ValueError("matrix is not expanding enough to bound the series")
    q = norms[k - 1]
    need = start + k
    if need > len(norms):
        norms = _inverse_power_norms(m, need)
    block = sum(norms[start:start + k])
    return SAFETY * block / (1.0 - q)


def b_infinity_radius(m: IntMatrix, d_max: int) -> int:
    """Sup-norm radius of a box certain to contain every R-periodic point."""
    return math.ceil(d_max * inverse_tail_sum(m, 0))


def heuristic_seed_radius(m: IntMatrix, d_max: int) -> int:
    """ceil(2 d_max / (sigma_min - 1)) with sigma_min the smallest eigenvalue modulus."""
    sigma = float(np.abs(np.linalg.eigvals(np.array(m, dtype=float))).min())
    return math.ceil(2 * d_max / (sigma - 1.0))
