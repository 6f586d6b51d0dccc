"""Linear sum assignment with deletion and insertion (LSAPE).

Every row of an extended cost matrix must be substituted by a column or
deleted, and every column must be substituted or inserted; the solver
minimizes the total cost of the chosen entries.  This is the subproblem
the quadratic search linearizes into, and doubles as a generator of
cheap initial node maps.

``lsape_solve`` is exact: it reduces the problem to a square assignment
problem of order n+m and delegates to scipy's solver.  ``lsape_bruteforce``
is an independent exhaustive oracle for small instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .model import DUMMY, NodeMap


@dataclass(frozen=True, eq=False)
class ExtendedCostMatrix:
    """(n+1) x (m+1) cost matrix with deletion column and insertion row.

    Entry (i, k) with i < n, k < m prices substituting row i by column k;
    the last column prices deleting each row, the last row prices inserting
    each column, and the corner is fixed at 0.
    """

    entries: np.ndarray

    def __init__(self, entries: np.ndarray):
        arr = np.asarray(entries, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(
                f"extended cost matrix needs 2 dimensions of size >= 1, "
                f"got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("extended cost matrix entries must be finite")
        if arr[-1, -1] != 0.0:
            raise ValueError(
                f"corner entry must be 0, got {arr[-1, -1]}"
            )
        object.__setattr__(self, "entries", arr)

    @property
    def num_rows(self) -> int:
        return self.entries.shape[0] - 1

    @property
    def num_cols(self) -> int:
        return self.entries.shape[1] - 1


def lsape_solve(c: ExtendedCostMatrix) -> tuple[NodeMap, float]:
    """Exact minimum-cost assignment with deletions and insertions.

    Returns the assignment as a node map (rows play the source side,
    columns the target side) together with the objective value.  Ties are
    broken deterministically for a fixed input.
    """
    n, m = c.num_rows, c.num_cols
    entries = c.entries
    if n == 0 and m == 0:
        return NodeMap(forward=[], backward=[]), 0.0

    # Square reduction: a deleted row is matched to its private column in
    # the right block, an inserted column to its private row in the bottom
    # block; non-private cells there carry a cost no optimum can afford.
    big = float(np.abs(entries).sum()) + 1.0
    square = np.full((n + m, n + m), big, dtype=np.float64)
    square[:n, :m] = entries[:n, :m]
    for i in range(n):
        square[i, m + i] = entries[i, m]
    for k in range(m):
        square[n + k, k] = entries[n, k]
    square[n:, m:] = 0.0

    rows, cols = linear_sum_assignment(square)
    forward = [DUMMY] * n
    objective = 0.0
    for r, col in zip(rows, cols):
        if r < n:
            if col < m:
                forward[r] = col + 1
                objective += entries[r, col]
            else:
                objective += entries[r, m]
        elif col < m:
            objective += entries[n, col]
    return NodeMap.from_forward(forward, m), objective


def lsape_bruteforce(c: ExtendedCostMatrix) -> tuple[NodeMap, float]:
    """Exhaustive minimum over all feasible assignments (verification oracle).

    Guarded to n + m <= 10; raises ValueError beyond that.
    """
    n, m = c.num_rows, c.num_cols
    if n + m > 10:
        raise ValueError(
            f"brute force refused: {n} + {m} exceeds the guard of 10"
        )
    entries = c.entries
    best_forward: list[int] | None = None
    best_objective = float("inf")
    for k in range(min(n, m) + 1):
        for rows in combinations(range(n), k):
            for col_subset in combinations(range(m), k):
                for cols in permutations(col_subset):
                    objective = 0.0
                    forward = [DUMMY] * n
                    for r, col in zip(rows, cols):
                        forward[r] = col + 1
                        objective += entries[r, col]
                    for r in range(n):
                        if forward[r] == DUMMY:
                            objective += entries[r, m]
                    covered = set(cols)
                    for col in range(m):
                        if col not in covered:
                            objective += entries[n, col]
                    if objective < best_objective:
                        best_objective = objective
                        best_forward = forward
    assert best_forward is not None
    return NodeMap.from_forward(best_forward, m), best_objective
