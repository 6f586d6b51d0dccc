"""Beam search over orderings of a node map's assignments.

The search lays the assignments out in a random order and walks a tree
whose node at depth s has, as children, every exchange of position s's
target with a later position's target (including the exchange with
itself).  Only the cheapest ``beam_width`` frontier nodes survive each
step, and the cheapest map ever visited is returned.  Repeating the search
over several independent orderings and keeping the minimum gives the
iterated variant.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ._seeds import derive_seed
from .model import (
    DUMMY,
    EditCostModel,
    LabeledGraph,
    NodeMap,
    induced_cost,
)
from .refine import SwapCycle, swap_cost_localized

Assignment = tuple[int, int]


@dataclass
class OrderedNodeMap:
    """A node map with an explicit, significant order on its assignments."""

    order: list[Assignment]
    cached_cost: float | None = None

    def __len__(self) -> int:
        return len(self.order)

    def to_node_map(self) -> NodeMap:
        """Forget the order, returning the plain node map."""
        num_source = sum(1 for u, _ in self.order if u != DUMMY)
        num_target = sum(1 for _, v in self.order if v != DUMMY)
        forward = [DUMMY] * num_source
        backward = [DUMMY] * num_target
        dummy_pair = False
        for u, v in self.order:
            if u == DUMMY and v == DUMMY:
                dummy_pair = True
                continue
            if u != DUMMY:
                forward[u - 1] = v
            if v != DUMMY:
                backward[v - 1] = u
        return NodeMap(
            forward=forward,
            backward=backward,
            contains_dummy_pair=dummy_pair,
            cached_cost=self.cached_cost,
        )


def _ordered_from(pi: NodeMap, ordering: list[Assignment]) -> OrderedNodeMap:
    return OrderedNodeMap(order=list(ordering), cached_cost=pi.cached_cost)


def _exchange_delta(
    g: LabeledGraph,
    h: LabeledGraph,
    base: NodeMap,
    a: Assignment,
    b: Assignment,
    costs: EditCostModel,
) -> float:
    """Cost change from exchanging the targets of assignments ``a`` and ``b``.

    A shared source or target can only be the dummy (real ones are unique),
    and exchanging across it leaves the assignment multiset unchanged, so
    the cost change is zero; such pairs would not form a valid swap cycle.
    """
    if a[0] == b[0] or a[1] == b[1]:
        return 0.0
    return swap_cost_localized(g, h, base, SwapCycle((a, b)), costs)


def ordered_swap(
    g: LabeledGraph,
    h: LabeledGraph,
    m: OrderedNodeMap,
    s: int,
    s_prime: int,
    costs: EditCostModel,
) -> OrderedNodeMap:
    """Exchange the targets of positions ``s`` and ``s_prime`` (1-based).

    Sources stay in place.  The new cost is cached via the localized swap
    delta; the self-swap returns an equal-cost copy.
    """
    size = len(m.order)
    if not (1 <= s <= s_prime <= size):
        raise IndexError(
            f"positions must satisfy 1 <= s <= s' <= {size}, got ({s}, {s_prime})"
        )
    base = m.to_node_map()
    if base.cached_cost is None:
        induced_cost(g, h, base, costs)
    if s == s_prime:
        return OrderedNodeMap(order=list(m.order), cached_cost=base.cached_cost)
    a = m.order[s - 1]
    b = m.order[s_prime - 1]
    delta = _exchange_delta(g, h, base, a, b, costs)
    new_order = list(m.order)
    new_order[s - 1] = (a[0], b[1])
    new_order[s_prime - 1] = (b[0], a[1])
    return OrderedNodeMap(order=new_order, cached_cost=base.cached_cost + delta)


def bp_beam(
    g: LabeledGraph,
    h: LabeledGraph,
    pi: NodeMap,
    costs: EditCostModel,
    beam_width: int = 5,
    ordering_seed: int = 0,
) -> NodeMap:
    """Beam search from ``pi`` under one random assignment ordering.

    Never returns a map costlier than the input.  Frontier ties are broken
    first-in-first-out, so results are deterministic for a fixed seed.
    """
    if beam_width < 1:
        raise ValueError(f"beam width must be at least 1, got {beam_width}")
    start = pi.copy()
    if start.cached_cost is None:
        induced_cost(g, h, start, costs)

    ordering = start.assignments()
    random.Random(ordering_seed).shuffle(ordering)
    size = len(ordering)

    best_order = list(ordering)
    best_cost = start.cached_cost

    # Frontier entries: (cost, insertion sequence, order, base map, depth).
    stamp = 0
    frontier: list[tuple[float, int, list[Assignment], NodeMap, int]] = [
        (start.cached_cost, stamp, list(ordering), start, 1)
    ]
    while frontier:
        frontier.sort(key=lambda entry: (entry[0], entry[1]))
        cost, _, order, base, depth = frontier.pop(0)
        if cost < best_cost:
            best_cost = cost
            best_order = order
        if depth > size:
            continue
        a = order[depth - 1]
        for s_prime in range(depth, size + 1):
            stamp += 1
            if s_prime == depth:
                frontier.append((cost, stamp, order, base, depth + 1))
                continue
            b = order[s_prime - 1]
            delta = _exchange_delta(g, h, base, a, b, costs)
            child_order = list(order)
            child_order[depth - 1] = (a[0], b[1])
            child_order[s_prime - 1] = (b[0], a[1])
            child = OrderedNodeMap(child_order, cost + delta).to_node_map()
            frontier.append((cost + delta, stamp, child_order, child, depth + 1))
        if len(frontier) > beam_width:
            frontier.sort(key=lambda entry: (entry[0], entry[1]))
            del frontier[beam_width:]

    result = OrderedNodeMap(best_order, best_cost).to_node_map()
    induced_cost(g, h, result, costs)
    return result


def ibp_beam(
    g: LabeledGraph,
    h: LabeledGraph,
    pi: NodeMap,
    costs: EditCostModel,
    beam_width: int = 5,
    num_orderings: int = 20,
    seed: int = 0,
) -> NodeMap:
    """Minimum over ``num_orderings`` independent beam searches.

    Ordering seeds are derived deterministically from ``seed``, so a fixed
    seed always explores the same set of orderings.
    """
    if num_orderings < 1:
        raise ValueError(f"need at least 1 ordering, got {num_orderings}")
    best: NodeMap | None = None
    for index in range(num_orderings):
        candidate = bp_beam(
            g,
            h,
            pi,
            costs,
            beam_width=beam_width,
            ordering_seed=derive_seed(seed, "ordering", index),
        )
        if best is None or candidate.cached_cost < best.cached_cost:
            best = candidate
    assert best is not None
    return best
