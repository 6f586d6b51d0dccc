"""Swap cycles and the variable-size swap refinement local search.

A size-K' swap picks K' assignments of the current node map and rotates
their targets one step around a directed cycle.  The refinement search
repeatedly scans all swaps of growing size, applies the best improving one,
and restarts at size 2, until no swap of any permitted size improves the
map.  With size capped at 2, no dummy assignment, and naive cost
evaluation, this degenerates to the classic best-improvement swap search
(available as :data:`REFINE_CONFIG`).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Callable, Iterator

import numpy as np

from . import _scan2
from .model import (
    DUMMY,
    EditCostModel,
    LabeledGraph,
    NodeMap,
    induced_cost,
)
from .tables import PairCostTables, build_pair_tables

Assignment = tuple[int, int]


@dataclass(frozen=True)
class SwapCycle:
    """A directed cycle over two or more distinct assignments of a node map.

    ``assignments`` is the forward set in cycle order, rotated so that the
    lexicographically smallest assignment comes first; two cycles equal up
    to rotation therefore compare equal.  The backward set pairs each
    source with the previous assignment's target.
    """

    assignments: tuple[Assignment, ...]

    def __init__(self, assignments: tuple[Assignment, ...] | list[Assignment]):
        items = tuple((int(u), int(v)) for u, v in assignments)
        if len(items) < 2:
            raise ValueError("a swap cycle needs at least 2 assignments")
        if len(set(items)) != len(items):
            raise ValueError(f"swap cycle {items!r} repeats an assignment")
        pivot = min(range(len(items)), key=lambda i: items[i])
        object.__setattr__(
            self, "assignments", items[pivot:] + items[:pivot]
        )

    def __len__(self) -> int:
        return len(self.assignments)

    def backward_assignments(self) -> tuple[Assignment, ...]:
        """The assignments created by the swap: source of the next paired
        with target of the current, around the cycle."""
        items = self.assignments
        k = len(items)
        return tuple(
            (items[(i + 1) % k][0], items[i][1]) for i in range(k)
        )


def enumerate_swaps(pi: NodeMap, k_prime: int) -> Iterator[SwapCycle]:
    """Yield every size-``k_prime`` swap cycle of ``pi`` exactly once.

    Cycles are generated as (assignment subset) x (cyclic orders), giving
    binom(|pi|, k') * (k'-1)! cycles in a deterministic order.  A ``k_prime``
    exceeding the assignment count yields nothing.
    """
    if k_prime < 2:
        raise ValueError(f"swap size must be at least 2, got {k_prime}")
    items = pi.assignments()
    for subset in combinations(items, k_prime):
        head = subset[0]
        for tail in permutations(subset[1:]):
            yield SwapCycle((head,) + tail)


def _check_membership(pi: NodeMap, cycle: SwapCycle) -> None:
    for u, v in cycle.assignments:
        if u == DUMMY and v == DUMMY:
            ok = pi.contains_dummy_pair
        elif u == DUMMY:
            ok = 1 <= v <= len(pi.backward) and pi.backward[v - 1] == DUMMY
        elif v == DUMMY:
            ok = 1 <= u <= len(pi.forward) and pi.forward[u - 1] == DUMMY
        else:
            ok = (
                1 <= u <= len(pi.forward)
                and 1 <= v <= len(pi.backward)
                and pi.forward[u - 1] == v
            )
        if not ok:
            raise ValueError(
                f"assignment ({u}, {v}) is not part of the node map"
            )


def swap_apply(pi: NodeMap, cycle: SwapCycle) -> NodeMap:
    """Apply a swap cycle, returning the new node map.

    The cycle's assignments are replaced by the rotated ones; a (dummy,
    dummy) pair produced by the rotation is dropped, and the dummy-pair
    flag of the result is always cleared (callers re-set it when they want
    the next scan to see it).  The cached cost is not carried over.
    """
    _check_membership(pi, cycle)
    fwd = list(pi.forward)
    bwd = list(pi.backward)
    for u, v in cycle.assignments:
        if u != DUMMY:
            fwd[u - 1] = DUMMY
        if v != DUMMY:
            bwd[v - 1] = DUMMY
    for u, v in cycle.backward_assignments():
        if u == DUMMY and v == DUMMY:
            continue
        if u != DUMMY:
            fwd[u - 1] = v
        if v != DUMMY:
            bwd[v - 1] = u
    return NodeMap(forward=fwd, backward=bwd)


def swap_cost_naive(
    g: LabeledGraph,
    h: LabeledGraph,
    pi: NodeMap,
    cycle: SwapCycle,
    costs: EditCostModel,
) -> float:
    """Cost change of a swap, by recomputing the full induced cost."""
    old = pi.cached_cost
    if old is None:
        old = induced_cost(g, h, pi, costs)
    swapped = swap_apply(pi, cycle)
    return induced_cost(g, h, swapped, costs) - old


def swap_cost_localized(
    g: LabeledGraph,
    h: LabeledGraph,
    pi: NodeMap,
    cycle: SwapCycle,
    costs: EditCostModel,
) -> float:
    """Cost change of a swap, touching only the cycle's neighborhoods.

    Restricts the induced-cost sum to the nodes named by the cycle and the
    edges incident to them, evaluated under the swapped and the original
    map; everything further away contributes identically to both and
    cancels.  Runs in time proportional to the touched degrees, never the
    whole graph.
    """
    _check_membership(pi, cycle)
    fwd_over: dict[int, int] = {}
    bwd_over: dict[int, int] = {}
    for u, v in cycle.backward_assignments():
        if u != DUMMY:
            fwd_over[u] = v
        if v != DUMMY:
            bwd_over[v] = u
    touched_g: list[int] = []
    touched_h: list[int] = []
    for u, v in cycle.assignments:
        if u != DUMMY:
            touched_g.append(u)
        if v != DUMMY:
            touched_h.append(v)
    touched_g_set = set(touched_g)
    touched_h_set = set(touched_h)

    fwd = pi.forward
    bwd = pi.backward

    def img_new(u: int) -> int:
        return fwd_over.get(u, fwd[u - 1])

    def pre_new(v: int) -> int:
        return bwd_over.get(v, bwd[v - 1])

    def node_term(u: int, k: int) -> float:
        if k == DUMMY:
            return costs.node_del(g.node_label(u))
        return costs.node_sub(g.node_label(u), h.node_label(k))

    def edge_term(alpha: str, k: int, l: int) -> float:
        if k != DUMMY and l != DUMMY:
            beta = h.edge_label(k, l)
            if beta is not None:
                return costs.edge_sub(alpha, beta)
        return costs.edge_del(alpha)

    delta = 0.0
    for u in touched_g:
        delta += node_term(u, img_new(u)) - node_term(u, fwd[u - 1])
    for v in touched_h:
        if pre_new(v) == DUMMY:
            delta += costs.node_ins(h.node_label(v))
        if bwd[v - 1] == DUMMY:
            delta -= costs.node_ins(h.node_label(v))

    for u in touched_g:
        for w, alpha in g.neighbors(u):
            if w in touched_g_set and w < u:
                continue
            l_new = img_new(w) if w in touched_g_set else fwd[w - 1]
            delta += edge_term(alpha, img_new(u), l_new)
            delta -= edge_term(alpha, fwd[u - 1], fwd[w - 1])

    for v in touched_h:
        for x, beta in h.neighbors(v):
            if x in touched_h_set and x < v:
                continue
            i_old, j_old = bwd[v - 1], bwd[x - 1]
            old_cov = (
                i_old != DUMMY and j_old != DUMMY and g.has_edge(i_old, j_old)
            )
            i_new = pre_new(v)
            j_new = pre_new(x) if x in touched_h_set else bwd[x - 1]
            new_cov = (
                i_new != DUMMY and j_new != DUMMY and g.has_edge(i_new, j_new)
            )
            if old_cov != new_cov:
                delta += -costs.edge_ins(beta) if new_cov else costs.edge_ins(beta)
    return delta


@dataclass(frozen=True)
class KRefineConfig:
    """Knobs of the refinement search.

    ``max_swap_size`` caps the cycle size; ``use_dummy_assignment`` adds the
    (dummy, dummy) pair before every scan so swaps can split substitutions
    into deletion + insertion; ``cost_mode`` picks the localized delta or
    the full-recomputation baseline.
    """

    max_swap_size: int = 2
    use_dummy_assignment: bool = True
    cost_mode: str = "localized"

    def __post_init__(self):
        if self.max_swap_size < 2:
            raise ValueError(
                f"max_swap_size must be at least 2, got {self.max_swap_size}"
            )
        if self.cost_mode not in ("localized", "naive"):
            raise ValueError(
                f"cost_mode must be 'localized' or 'naive', got {self.cost_mode!r}"
            )


#: The classic best-improvement swap search: pairwise swaps only, no dummy
#: assignment, full cost recomputation per candidate.
REFINE_CONFIG = KRefineConfig(
    max_swap_size=2, use_dummy_assignment=False, cost_mode="naive"
)


def _positions_arrays(pi: NodeMap) -> tuple[np.ndarray, np.ndarray]:
    """Canonical assignment list of ``pi`` as 0-based position arrays."""
    n = len(pi.forward)
    m = len(pi.backward)
    extra = [k for k in range(m) if pi.backward[k] == DUMMY]
    count = n + len(extra) + (1 if pi.contains_dummy_pair else 0)
    pos_src = np.empty(count, dtype=np.int64)
    pos_tgt = np.empty(count, dtype=np.int64)
    pos_src[:n] = np.arange(n)
    pos_tgt[:n] = np.asarray(pi.forward, dtype=np.int64) - 1
    pos_src[n : n + len(extra)] = -1
    pos_tgt[n : n + len(extra)] = np.asarray(extra, dtype=np.int64)
    if pi.contains_dummy_pair:
        pos_src[-1] = -1
        pos_tgt[-1] = -1
    return pos_src, pos_tgt


def _kernel_best_swap(
    pi: NodeMap, tables: PairCostTables
) -> tuple[float, SwapCycle | None]:
    pos_src, pos_tgt = _positions_arrays(pi)
    fwd = np.asarray(pi.forward, dtype=np.int64) - 1
    bwd = np.asarray(pi.backward, dtype=np.int64) - 1
    delta, p, q = _scan2.best_pair_swap(
        pos_src,
        pos_tgt,
        fwd,
        bwd,
        tables.node_cost,
        tables.g_indptr,
        tables.g_indices,
        tables.g_elab,
        tables.h_indptr,
        tables.h_indices,
        tables.h_elab,
        tables.glab,
        tables.hlab,
        tables.esub,
        tables.edel,
        tables.eins,
    )
    if p < 0:
        return float("inf"), None
    cycle = SwapCycle(
        (
            (int(pos_src[p]) + 1, int(pos_tgt[p]) + 1),
            (int(pos_src[q]) + 1, int(pos_tgt[q]) + 1),
        )
    )
    return float(delta), cycle


def _python_best_swap(
    g: LabeledGraph,
    h: LabeledGraph,
    pi: NodeMap,
    k_prime: int,
    costs: EditCostModel,
    cost_fn,
) -> tuple[float, SwapCycle | None]:
    best_delta = float("inf")
    best_cycle: SwapCycle | None = None
    for cycle in enumerate_swaps(pi, k_prime):
        delta = cost_fn(g, h, pi, cycle, costs)
        if delta < best_delta:
            best_delta = delta
            best_cycle = cycle
    return best_delta, best_cycle


def k_refine(
    g: LabeledGraph,
    h: LabeledGraph,
    pi: NodeMap,
    costs: EditCostModel,
    config: KRefineConfig = KRefineConfig(),
    *,
    tables: PairCostTables | None = None,
    on_accept: Callable[[NodeMap], None] | None = None,
) -> NodeMap:
    """Refine a node map by best-improvement swaps of size 2..max_swap_size.

    Scans all swaps of the current size, applies the strictly improving one
    with the most negative cost change (first in enumeration order on
    ties), updates the cached cost incrementally, and resets the size to 2;
    when a full scan finds no improvement the size grows by one, and the
    search stops once the largest size fails to improve.  The returned
    map's cost never exceeds the input's.

    ``on_accept``, when given, is called with the current map after every
    accepted swap (tests use it to watch the descent).
    """
    cur = pi.copy()
    if cur.cached_cost is None:
        induced_cost(g, h, cur, costs)
    use_kernel = config.cost_mode == "localized" and _scan2.NUMBA_AVAILABLE
    if use_kernel and tables is None:
        tables = build_pair_tables(g, h, costs)
    cost_fn = (
        swap_cost_localized if config.cost_mode == "localized" else swap_cost_naive
    )

    size = 2
    while size <= config.max_swap_size:
        if config.use_dummy_assignment:
            cur.contains_dummy_pair = True
        if size == 2 and use_kernel:
            delta, cycle = _kernel_best_swap(cur, tables)
        else:
            delta, cycle = _python_best_swap(g, h, cur, size, costs, cost_fn)
        if cycle is not None and delta < 0.0:
            old_cost = cur.cached_cost
            cur = swap_apply(cur, cycle)
            cur.cached_cost = old_cost + delta
            if on_accept is not None:
                on_accept(cur)
            size = 2
        else:
            size += 1
    cur.contains_dummy_pair = False
    return cur
