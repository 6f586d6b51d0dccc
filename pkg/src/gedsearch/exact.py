"""Brute-force exact graph edit distance for small instances.

Exists for verification: every heuristic upper bound can be checked against
the true minimum as long as the combined node count stays within the guard.
"""

from __future__ import annotations

from itertools import combinations, permutations
from typing import Iterator

from .model import DUMMY, EditCostModel, LabeledGraph, NodeMap, induced_cost

#: Enumeration is factorial; refuse pairs beyond this combined node count.
MAX_TOTAL_NODES = 12


def enumerate_node_maps(g: LabeledGraph, h: LabeledGraph) -> Iterator[NodeMap]:
    """Yield every node map between g and h exactly once.

    A map is determined by the subset of source nodes that are substituted,
    the equally sized subset of target nodes they land on, and the bijection
    between the two; all remaining sources are deleted and all remaining
    targets inserted.

    Raises ValueError when ``g.num_nodes + h.num_nodes`` exceeds the guard.
    """
    n, m = g.num_nodes, h.num_nodes
    if n + m > MAX_TOTAL_NODES:
        raise ValueError(
            f"brute force refused: {n} + {m} nodes exceeds the "
            f"guard of {MAX_TOTAL_NODES}"
        )
    sources = range(1, n + 1)
    targets = range(1, m + 1)
    for k in range(min(n, m) + 1):
        for sub_sources in combinations(sources, k):
            for sub_targets in combinations(targets, k):
                for image in permutations(sub_targets):
                    forward = [DUMMY] * n
                    for i, t in zip(sub_sources, image):
                        forward[i - 1] = t
                    yield NodeMap.from_forward(forward, m)


def exact_ged(
    g: LabeledGraph, h: LabeledGraph, costs: EditCostModel
) -> tuple[float, NodeMap]:
    """Exact graph edit distance and a witness map attaining it.

    Subject to the same size guard as :func:`enumerate_node_maps`.
    """
    best_value: float | None = None
    best_map: NodeMap | None = None
    for pi in enumerate_node_maps(g, h):
        value = induced_cost(g, h, pi, costs)
        if best_value is None or value < best_value:
            best_value = value
            best_map = pi
    assert best_value is not None and best_map is not None
    return best_value, best_map
