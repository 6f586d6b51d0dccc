"""Precomputed numeric tables for one graph pair under one cost model.

The local searches evaluate huge numbers of candidate swaps; going through
label tokens and cost callables each time would dominate the runtime.  This
module flattens a (graph, graph, cost model) triple into plain numpy arrays
once, so the hot loops only do integer indexing.  Node indices inside the
tables are 0-based; -1 stands for the dummy node.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .model import EditCostModel, LabeledGraph


@dataclass(frozen=True, eq=False)
class PairCostTables:
    """Numeric view of a graph pair; all arrays are read-only.

    ``node_cost`` has shape (n+1, m+1): entry [i, k] with i < n, k < m is
    the substitution cost of source node i+1 by target node k+1, column m
    holds deletion costs, row n insertion costs, and the corner is 0.
    ``glab``/``hlab`` are dense adjacency matrices holding edge-label ids
    (-1 where there is no edge); ``g_indptr``/``g_indices``/``g_elab`` are
    the same adjacency in compressed sparse rows for iteration.
    """

    n: int
    m: int
    node_cost: np.ndarray
    edge_alphabet: tuple[str, ...]
    esub: np.ndarray
    edel: np.ndarray
    eins: np.ndarray
    g_indptr: np.ndarray
    g_indices: np.ndarray
    g_elab: np.ndarray
    h_indptr: np.ndarray
    h_indices: np.ndarray
    h_elab: np.ndarray
    glab: np.ndarray
    hlab: np.ndarray


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _csr_adjacency(
    graph: LabeledGraph, label_id: dict[str, int]
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = graph.num_nodes
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices: list[int] = []
    elab: list[int] = []
    for u in range(1, n + 1):
        for w, lab in graph.neighbors(u):
            indices.append(w - 1)
            elab.append(label_id[lab])
        indptr[u] = len(indices)
    return (
        _freeze(indptr),
        _freeze(np.asarray(indices, dtype=np.int64)),
        _freeze(np.asarray(elab, dtype=np.int64)),
    )


def _dense_labels(graph: LabeledGraph, label_id: dict[str, int]) -> np.ndarray:
    n = graph.num_nodes
    mat = np.full((n, n), -1, dtype=np.int64)
    for i, j, lab in graph.edges:
        a = label_id[lab]
        mat[i - 1, j - 1] = a
        mat[j - 1, i - 1] = a
    return _freeze(mat)


@lru_cache(maxsize=128)
def build_pair_tables(
    g: LabeledGraph, h: LabeledGraph, costs: EditCostModel
) -> PairCostTables:
    """Build (and cache) the numeric tables for a pair of graphs."""
    n, m = g.num_nodes, h.num_nodes

    node_cost = np.zeros((n + 1, m + 1), dtype=np.float64)
    for i in range(1, n + 1):
        a = g.node_label(i)
        for k in range(1, m + 1):
            node_cost[i - 1, k - 1] = costs.node_sub(a, h.node_label(k))
        node_cost[i - 1, m] = costs.node_del(a)
    for k in range(1, m + 1):
        node_cost[n, k - 1] = costs.node_ins(h.node_label(k))

    alphabet = tuple(
        sorted({lab for _, _, lab in g.edges} | {lab for _, _, lab in h.edges})
    )
    label_id = {lab: idx for idx, lab in enumerate(alphabet)}
    size = len(alphabet)
    esub = np.zeros((size, size), dtype=np.float64)
    edel = np.zeros(size, dtype=np.float64)
    eins = np.zeros(size, dtype=np.float64)
    for a_idx, a in enumerate(alphabet):
        edel[a_idx] = costs.edge_del(a)
        eins[a_idx] = costs.edge_ins(a)
        for b_idx, b in enumerate(alphabet):
            esub[a_idx, b_idx] = costs.edge_sub(a, b)

    g_indptr, g_indices, g_elab = _csr_adjacency(g, label_id)
    h_indptr, h_indices, h_elab = _csr_adjacency(h, label_id)

    return PairCostTables(
        n=n,
        m=m,
        node_cost=_freeze(node_cost),
        edge_alphabet=alphabet,
        esub=_freeze(esub),
        edel=_freeze(edel),
        eins=_freeze(eins),
        g_indptr=g_indptr,
        g_indices=g_indices,
        g_elab=g_elab,
        h_indptr=h_indptr,
        h_indices=h_indices,
        h_elab=h_elab,
        glab=_dense_labels(g, label_id),
        hlab=_dense_labels(h, label_id),
    )
