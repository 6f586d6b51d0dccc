"""Core data model: labeled graphs, node maps, and edit-cost models.

A node map pairs every node of one graph with a node of another graph or
with the dummy node (standing for deletion on one side, insertion on the
other).  Each node map induces a full edit path, and the cost of that path
is the quantity all search algorithms in this package try to minimize.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

#: Sentinel for the dummy node.  Node indices are 1-based, so 0 is free.
DUMMY = 0


class GraphStructureError(ValueError):
    """Raised when graph data violates a structural invariant."""


@dataclass(frozen=True)
class LabeledGraph:
    """Simple undirected graph with label tokens on nodes and edges.

    Nodes are identified by 1-based indices; node ``i`` carries label
    ``node_labels[i - 1]``.  Edges are unordered pairs of distinct node
    indices, each with a label token.  Instances are immutable and safe to
    share across threads.
    """

    graph_id: str
    node_labels: tuple[str, ...]
    edges: tuple[tuple[int, int, str], ...]
    adjacency: tuple[tuple[tuple[int, str], ...], ...] = field(
        init=False, repr=False, compare=False
    )
    _edge_labels: dict[tuple[int, int], str] = field(
        init=False, repr=False, compare=False
    )

    def __init__(
        self,
        graph_id: str,
        node_labels: Sequence[str],
        edges: Iterable[tuple[int, int, str]] = (),
    ):
        object.__setattr__(self, "graph_id", str(graph_id))
        object.__setattr__(self, "node_labels", tuple(str(t) for t in node_labels))
        n = len(self.node_labels)

        canonical: list[tuple[int, int, str]] = []
        label_of: dict[tuple[int, int], str] = {}
        for i, j, lab in edges:
            if not (1 <= i <= n) or not (1 <= j <= n):
                raise GraphStructureError(
                    f"graph {self.graph_id!r}: edge ({i}, {j}) has an endpoint "
                    f"outside 1..{n}"
                )
            if i == j:
                raise GraphStructureError(
                    f"graph {self.graph_id!r}: self-loop at node {i} not allowed"
                )
            key = (i, j) if i < j else (j, i)
            if key in label_of:
                raise GraphStructureError(
                    f"graph {self.graph_id!r}: duplicate edge {key}"
                )
            label_of[key] = str(lab)
            canonical.append((key[0], key[1], str(lab)))
        canonical.sort(key=lambda e: (e[0], e[1]))
        object.__setattr__(self, "edges", tuple(canonical))
        object.__setattr__(self, "_edge_labels", label_of)

        neighbors: list[list[tuple[int, str]]] = [[] for _ in range(n)]
        for i, j, lab in self.edges:
            neighbors[i - 1].append((j, lab))
            neighbors[j - 1].append((i, lab))
        object.__setattr__(
            self, "adjacency", tuple(tuple(sorted(ns)) for ns in neighbors)
        )

    @property
    def num_nodes(self) -> int:
        return len(self.node_labels)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def node_label(self, i: int) -> str:
        return self.node_labels[i - 1]

    def edge_label(self, i: int, j: int) -> str | None:
        """Label of the edge between ``i`` and ``j``, or None if absent."""
        key = (i, j) if i < j else (j, i)
        return self._edge_labels.get(key)

    def has_edge(self, i: int, j: int) -> bool:
        key = (i, j) if i < j else (j, i)
        return key in self._edge_labels

    def neighbors(self, i: int) -> tuple[tuple[int, str], ...]:
        return self.adjacency[i - 1]

    def degree(self, i: int) -> int:
        return len(self.adjacency[i - 1])

    def __hash__(self) -> int:
        return hash((self.graph_id, self.node_labels, self.edges))


@dataclass
class NodeMap:
    """Assignment of every node of a source graph to a target node or DUMMY.

    ``forward[i - 1]`` is the image of source node ``i`` (DUMMY means the
    node is deleted); ``backward[k - 1]`` is the preimage of target node
    ``k`` (DUMMY means the node is inserted).  The two arrays are mutually
    inverse on non-dummy entries.  ``contains_dummy_pair`` records the
    presence of the conceptual no-op assignment (DUMMY, DUMMY), which some
    searches add so a swap can split a substitution into a deletion plus an
    insertion.  ``cached_cost`` holds the induced cost once computed.
    """

    forward: list[int]
    backward: list[int]
    contains_dummy_pair: bool = False
    cached_cost: float | None = None

    @classmethod
    def identity(cls, num_nodes: int) -> "NodeMap":
        ids = list(range(1, num_nodes + 1))
        return cls(forward=ids, backward=list(ids))

    @classmethod
    def from_forward(cls, forward: Sequence[int], num_target_nodes: int) -> "NodeMap":
        """Build a map from the forward array alone, deriving backward."""
        backward = [DUMMY] * num_target_nodes
        for i, k in enumerate(forward, start=1):
            if k != DUMMY:
                if not (1 <= k <= num_target_nodes):
                    raise ValueError(f"forward image {k} outside 1..{num_target_nodes}")
                if backward[k - 1] != DUMMY:
                    raise ValueError(f"target node {k} assigned twice")
                backward[k - 1] = i
        return cls(forward=list(forward), backward=backward)

    @property
    def num_source_nodes(self) -> int:
        return len(self.forward)

    @property
    def num_target_nodes(self) -> int:
        return len(self.backward)

    @property
    def substitution_count(self) -> int:
        return sum(1 for k in self.forward if k != DUMMY)

    @property
    def num_assignments(self) -> int:
        """Number of assignments, counting the dummy pair when present."""
        inserted = sum(1 for i in self.backward if i == DUMMY)
        return len(self.forward) + inserted + (1 if self.contains_dummy_pair else 0)

    def __len__(self) -> int:
        return self.num_assignments

    def image(self, i: int) -> int:
        return self.forward[i - 1]

    def preimage(self, k: int) -> int:
        return self.backward[k - 1]

    def assignments(self) -> list[tuple[int, int]]:
        """All assignments in canonical order.

        Substitutions and deletions come first, by source index; then
        insertions by target index; the dummy pair, if present, is last.
        """
        out = [(i, k) for i, k in enumerate(self.forward, start=1)]
        for k, i in enumerate(self.backward, start=1):
            if i == DUMMY:
                out.append((DUMMY, k))
        if self.contains_dummy_pair:
            out.append((DUMMY, DUMMY))
        return out

    def assignment_key(self) -> tuple:
        """Hashable identity of the assignment set (ignores cached cost)."""
        return (tuple(self.forward), self.contains_dummy_pair)

    def copy(self) -> "NodeMap":
        return NodeMap(
            forward=list(self.forward),
            backward=list(self.backward),
            contains_dummy_pair=self.contains_dummy_pair,
            cached_cost=self.cached_cost,
        )


def _nonneg(value: float, what: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise ValueError(f"{what} must be finite and nonnegative, got {value}")
    return value


@dataclass(frozen=True)
class EditCostModel:
    """The six edit-cost functions for nodes and edges.

    Substitution costs take the two labels involved; deletion and insertion
    costs take the single label of the removed or added element.  All costs
    must be finite and nonnegative.
    """

    node_sub: Callable[[str, str], float]
    node_del: Callable[[str], float]
    node_ins: Callable[[str], float]
    edge_sub: Callable[[str, str], float]
    edge_del: Callable[[str], float]
    edge_ins: Callable[[str], float]

    @classmethod
    def constant(cls, sub_cost: float, del_cost: float, ins_cost: float) -> "EditCostModel":
        """Constant costs, applied alike to nodes and edges.

        Substituting an element by one with the same label is free, so
        isomorphic graphs are at distance 0.
        """
        sub = _nonneg(sub_cost, "substitution cost")
        dele = _nonneg(del_cost, "deletion cost")
        ins = _nonneg(ins_cost, "insertion cost")
        return cls(
            node_sub=lambda a, b: 0.0 if a == b else sub,
            node_del=lambda a: dele,
            node_ins=lambda a: ins,
            edge_sub=lambda a, b: 0.0 if a == b else sub,
            edge_del=lambda a: dele,
            edge_ins=lambda a: ins,
        )

    @classmethod
    def tabulated(
        cls,
        node_sub: Mapping[tuple[str, str], float],
        node_del: Mapping[str, float],
        node_ins: Mapping[str, float],
        edge_sub: Mapping[tuple[str, str], float],
        edge_del: Mapping[str, float],
        edge_ins: Mapping[str, float],
        *,
        node_sub_default: float = 1.0,
        node_del_default: float = 1.0,
        node_ins_default: float = 1.0,
        edge_sub_default: float = 1.0,
        edge_del_default: float = 1.0,
        edge_ins_default: float = 1.0,
    ) -> "EditCostModel":
        """Costs looked up from tables, with per-operation defaults.

        Substitution tables are consulted with both label orders; a pair
        absent from the table costs 0 for equal labels and the default
        otherwise.  Unary tables fall back to their default directly.
        """
        for table in (node_sub, edge_sub):
            for v in table.values():
                _nonneg(v, "substitution table entry")
        for table in (node_del, node_ins, edge_del, edge_ins):
            for v in table.values():
                _nonneg(v, "deletion/insertion table entry")
        for v, what in (
            (node_sub_default, "node_sub_default"),
            (node_del_default, "node_del_default"),
            (node_ins_default, "node_ins_default"),
            (edge_sub_default, "edge_sub_default"),
            (edge_del_default, "edge_del_default"),
            (edge_ins_default, "edge_ins_default"),
        ):
            _nonneg(v, what)

        def sub_lookup(table: Mapping[tuple[str, str], float], default: float):
            def cost(a: str, b: str) -> float:
                if (a, b) in table:
                    return float(table[(a, b)])
                if (b, a) in table:
                    return float(table[(b, a)])
                return 0.0 if a == b else default

            return cost

        def unary_lookup(table: Mapping[str, float], default: float):
            return lambda a: float(table.get(a, default))

        return cls(
            node_sub=sub_lookup(dict(node_sub), float(node_sub_default)),
            node_del=unary_lookup(dict(node_del), float(node_del_default)),
            node_ins=unary_lookup(dict(node_ins), float(node_ins_default)),
            edge_sub=sub_lookup(dict(edge_sub), float(edge_sub_default)),
            edge_del=unary_lookup(dict(edge_del), float(edge_del_default)),
            edge_ins=unary_lookup(dict(edge_ins), float(edge_ins_default)),
        )


def validate_node_map(g: LabeledGraph, h: LabeledGraph, pi: NodeMap) -> bool:
    """True iff ``pi`` is a structurally valid node map between g and h."""
    if len(pi.forward) != g.num_nodes or len(pi.backward) != h.num_nodes:
        return False
    if not isinstance(pi.contains_dummy_pair, bool):
        return False
    seen_targets: set[int] = set()
    for i, k in enumerate(pi.forward, start=1):
        if k == DUMMY:
            continue
        if not (1 <= k <= h.num_nodes) or k in seen_targets:
            return False
        if pi.backward[k - 1] != i:
            return False
        seen_targets.add(k)
    for k, i in enumerate(pi.backward, start=1):
        if i == DUMMY:
            continue
        if not (1 <= i <= g.num_nodes) or pi.forward[i - 1] != k:
            return False
    return True


def induced_cost(
    g: LabeledGraph, h: LabeledGraph, pi: NodeMap, costs: EditCostModel
) -> float:
    """Total cost of the edit path induced by ``pi``.

    Sums node substitutions/deletions/insertions and edge substitutions/
    deletions/insertions; each undirected edge contributes exactly once.
    The result is stored into ``pi.cached_cost`` and returned.

    Raises ValueError if the map's array shapes do not match the graphs.
    """
    if len(pi.forward) != g.num_nodes or len(pi.backward) != h.num_nodes:
        raise ValueError(
            f"node map shape ({len(pi.forward)}, {len(pi.backward)}) does not "
            f"match graphs ({g.num_nodes}, {h.num_nodes})"
        )
    fwd = pi.forward
    bwd = pi.backward
    glab = g.node_labels
    hlab = h.node_labels

    total = 0.0
    for i, k in enumerate(fwd, start=1):
        if k == DUMMY:
            total += costs.node_del(glab[i - 1])
        else:
            total += costs.node_sub(glab[i - 1], hlab[k - 1])
    for k, i in enumerate(bwd, start=1):
        if i == DUMMY:
            total += costs.node_ins(hlab[k - 1])

    for i, j, alpha in g.edges:
        k = fwd[i - 1]
        l = fwd[j - 1]
        beta = h.edge_label(k, l) if (k != DUMMY and l != DUMMY) else None
        if beta is None:
            total += costs.edge_del(alpha)
        else:
            total += costs.edge_sub(alpha, beta)
    for k, l, beta in h.edges:
        i = bwd[k - 1]
        j = bwd[l - 1]
        if i == DUMMY or j == DUMMY or not g.has_edge(i, j):
            total += costs.edge_ins(beta)

    pi.cached_cost = total
    return total


def permute_graph(
    g: LabeledGraph,
    permutation: Sequence[int],
    graph_id: str | None = None,
) -> tuple[LabeledGraph, NodeMap]:
    """Relabel g's nodes through a bijection on 1..n.

    ``permutation[i - 1]`` is the new index of old node ``i``.  Returns the
    permuted graph together with the witness node map sending each node to
    its copy; under any cost model that prices equal-label substitutions at
    0, that witness has induced cost 0.
    """
    n = g.num_nodes
    perm = [int(p) for p in permutation]
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"permutation {perm!r} is not a bijection on 1..{n}")
    new_labels = [""] * n
    for i, p in enumerate(perm, start=1):
        new_labels[p - 1] = g.node_label(i)
    new_edges = [(perm[i - 1], perm[j - 1], lab) for i, j, lab in g.edges]
    permuted = LabeledGraph(
        graph_id if graph_id is not None else f"{g.graph_id}-permuted",
        new_labels,
        new_edges,
    )
    witness = NodeMap.from_forward(perm, n)
    return permuted, witness
