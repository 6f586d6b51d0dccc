"""Jit-compiled scan for the best pairwise swap of a node map.

The size-2 swap scan is by far the hottest loop in the package: a full
refinement descent evaluates it thousands of times per pass.  This module
holds a numba translation of the localized swap-cost evaluation working
purely on the flat arrays of :class:`~gedsearch.tables.PairCostTables`.
When numba is unavailable the callers fall back to the pure-Python scan,
which computes identical deltas.

Conventions: node indices are 0-based here, -1 is the dummy node; the
position arrays list a node map's assignments in canonical order.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True, nogil=True)
def _edge_term(a, k, l, hlab, esub, edel):
    # Cost of a source edge with label id `a` whose endpoints map to k, l.
    if k >= 0 and l >= 0:
        b = hlab[k, l]
        if b >= 0:
            return esub[a, b]
    return edel[a]


@njit(cache=True, nogil=True)
def _pair_delta(
    u1,
    v1,
    u2,
    v2,
    fwd,
    bwd,
    node_cost,
    g_indptr,
    g_indices,
    g_elab,
    h_indptr,
    h_indices,
    h_elab,
    glab,
    hlab,
    esub,
    edel,
    eins,
):
    """Cost change of swapping assignments (u1,v1) and (u2,v2).

    The swap replaces them by (u1,v2) and (u2,v1).  Only the touched nodes
    and their incident edges are inspected.
    """
    n = fwd.shape[0]
    m = bwd.shape[0]
    r1 = u1 if u1 >= 0 else n
    c1 = v1 if v1 >= 0 else m
    r2 = u2 if u2 >= 0 else n
    c2 = v2 if v2 >= 0 else m
    delta = (
        node_cost[r1, c2]
        + node_cost[r2, c1]
        - node_cost[r1, c1]
        - node_cost[r2, c2]
    )

    # Source-side edges: substitution-or-deletion terms can change only on
    # edges incident to a touched source node.  An edge joining the two
    # touched nodes is visited from its lower-index endpoint only.
    for t in range(2):
        u = u1 if t == 0 else u2
        if u < 0:
            continue
        other = u2 if t == 0 else u1
        kn = v2 if t == 0 else v1
        for e in range(g_indptr[u], g_indptr[u + 1]):
            w = g_indices[e]
            if w == other and w < u:
                continue
            a = g_elab[e]
            old = _edge_term(a, fwd[u], fwd[w], hlab, esub, edel)
            if w == u1:
                ln = v2
            elif w == u2:
                ln = v1
            else:
                ln = fwd[w]
            delta += _edge_term(a, kn, ln, hlab, esub, edel) - old

    # Target-side edges contribute insertion costs while uncovered; the
    # covered state can change only next to a touched target node.
    for t in range(2):
        v = v1 if t == 0 else v2
        if v < 0:
            continue
        otherv = v2 if t == 0 else v1
        inn = u2 if t == 0 else u1
        for e in range(h_indptr[v], h_indptr[v + 1]):
            x = h_indices[e]
            if x == otherv and x < v:
                continue
            b = h_elab[e]
            io = bwd[v]
            jo = bwd[x]
            old_cov = io >= 0 and jo >= 0 and glab[io, jo] >= 0
            if x == v1:
                jn = u2
            elif x == v2:
                jn = u1
            else:
                jn = bwd[x]
            new_cov = inn >= 0 and jn >= 0 and glab[inn, jn] >= 0
            if old_cov != new_cov:
                delta += -eins[b] if new_cov else eins[b]
    return delta


@njit(cache=True, nogil=True)
def best_pair_swap(
    pos_src,
    pos_tgt,
    fwd,
    bwd,
    node_cost,
    g_indptr,
    g_indices,
    g_elab,
    h_indptr,
    h_indices,
    h_elab,
    glab,
    hlab,
    esub,
    edel,
    eins,
):
    """Scan all position pairs p < q, returning (best delta, p, q).

    Ties keep the first pair in scan order; with no candidate pairs the
    delta comes back as +inf and the positions as -1.
    """
    count = pos_src.shape[0]
    best = np.inf
    bp = -1
    bq = -1
    for p in range(count):
        u1 = pos_src[p]
        v1 = pos_tgt[p]
        for q in range(p + 1, count):
            d = _pair_delta(
                u1,
                v1,
                pos_src[q],
                pos_tgt[q],
                fwd,
                bwd,
                node_cost,
                g_indptr,
                g_indices,
                g_elab,
                h_indptr,
                h_indices,
                h_elab,
                glab,
                hlab,
                esub,
                edel,
                eins,
            )
            if d < best:
                best = d
                bp = p
                bq = q
    return best, bp, bq
