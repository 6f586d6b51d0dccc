"""Graph file formats, synthetic generation, and cost-table loading.

The native text format is line-oriented and diff-friendly:

    graph <id>
    n <node count>
    v <index> <label>
    e <i> <j> <label>

Tokens are whitespace-separated, ``#`` starts a comment, node indices are
1-based, and labels are arbitrary non-whitespace tokens.  A file may hold
several graphs back to back, each starting with its ``graph`` line.

A small GXL subset is also read: one <graph> element, <node> elements with
an id and a first <attr> whose text becomes the label, <edge> elements
with from/to references.
"""

from __future__ import annotations

import json
import random
import string
import warnings
import xml.etree.ElementTree as ET
from pathlib import Path

from .model import EditCostModel, LabeledGraph


class GraphFormatError(ValueError):
    """Base class for graph input problems; carries the offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedLineError(GraphFormatError):
    """A line does not match the format grammar."""


class DanglingIndexError(GraphFormatError):
    """An edge endpoint references a node index that does not exist."""


class DuplicateEdgeError(GraphFormatError):
    """The same unordered node pair carries more than one edge."""


def _decode(data: bytes | str) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


class _TextGraphBuilder:
    def __init__(self, line: int, graph_id: str):
        self.start_line = line
        self.graph_id = graph_id
        self.declared: int | None = None
        self.labels: dict[int, str] = {}
        self.edges: list[tuple[int, int, int, str]] = []  # (line, i, j, label)

    def finish(self) -> LabeledGraph:
        if self.declared is None:
            raise MalformedLineError(
                f"graph {self.graph_id!r} has no 'n' line", self.start_line
            )
        n = self.declared
        for idx in range(1, n + 1):
            if idx not in self.labels:
                raise MalformedLineError(
                    f"graph {self.graph_id!r} never labels node {idx}",
                    self.start_line,
                )
        node_labels = [self.labels[idx] for idx in range(1, n + 1)]
        seen: set[tuple[int, int]] = set()
        edges = []
        for line, i, j, lab in self.edges:
            if not (1 <= i <= n) or not (1 <= j <= n):
                raise DanglingIndexError(
                    f"edge ({i}, {j}) references a node outside 1..{n}", line
                )
            if i == j:
                raise MalformedLineError(f"self-loop at node {i} not allowed", line)
            key = (i, j) if i < j else (j, i)
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge {key}", line)
            seen.add(key)
            edges.append((i, j, lab))
        return LabeledGraph(self.graph_id, node_labels, edges)


def _parse_int(token: str, what: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise MalformedLineError(f"{what} must be an integer, got {token!r}", line)


def parse_text_dataset(data: bytes | str) -> list[LabeledGraph]:
    """Parse every graph in a text-format document, in file order."""
    graphs: list[LabeledGraph] = []
    builder: _TextGraphBuilder | None = None
    for lineno, raw in enumerate(_decode(data).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0]
        if keyword == "graph":
            if len(tokens) != 2:
                raise MalformedLineError(
                    f"expected 'graph <id>', got {line!r}", lineno
                )
            if builder is not None:
                graphs.append(builder.finish())
            builder = _TextGraphBuilder(lineno, tokens[1])
            continue
        if builder is None:
            raise MalformedLineError(
                f"{keyword!r} line before any 'graph' declaration", lineno
            )
        if keyword == "n":
            if len(tokens) != 2:
                raise MalformedLineError(f"expected 'n <count>', got {line!r}", lineno)
            count = _parse_int(tokens[1], "node count", lineno)
            if count < 0:
                raise MalformedLineError(f"negative node count {count}", lineno)
            if builder.declared is not None:
                raise MalformedLineError("second 'n' line for the same graph", lineno)
            builder.declared = count
        elif keyword == "v":
            if len(tokens) != 3:
                raise MalformedLineError(
                    f"expected 'v <index> <label>', got {line!r}", lineno
                )
            idx = _parse_int(tokens[1], "node index", lineno)
            if builder.declared is None:
                raise MalformedLineError("'v' line before the 'n' line", lineno)
            if not (1 <= idx <= builder.declared):
                raise MalformedLineError(
                    f"node index {idx} outside 1..{builder.declared}", lineno
                )
            if idx in builder.labels:
                raise MalformedLineError(f"node {idx} labeled twice", lineno)
            builder.labels[idx] = tokens[2]
        elif keyword == "e":
            if len(tokens) != 4:
                raise MalformedLineError(
                    f"expected 'e <i> <j> <label>', got {line!r}", lineno
                )
            i = _parse_int(tokens[1], "edge endpoint", lineno)
            j = _parse_int(tokens[2], "edge endpoint", lineno)
            builder.edges.append((lineno, i, j, tokens[3]))
        else:
            raise MalformedLineError(f"unknown keyword {keyword!r}", lineno)
    if builder is not None:
        graphs.append(builder.finish())
    return graphs


def parse_text_graph(data: bytes | str) -> LabeledGraph:
    """Parse exactly one graph from a text-format document."""
    graphs = parse_text_dataset(data)
    if len(graphs) != 1:
        raise MalformedLineError(
            f"expected exactly one graph, found {len(graphs)}"
        )
    return graphs[0]


def format_text_graph(g: LabeledGraph) -> str:
    """Serialize a graph to the text format (canonical edge order)."""
    for token in (g.graph_id, *g.node_labels) + tuple(lab for _, _, lab in g.edges):
        if not token or any(ch.isspace() for ch in token):
            raise ValueError(
                f"token {token!r} cannot be serialized: labels and ids must be "
                f"non-empty and whitespace-free"
            )
    lines = [f"graph {g.graph_id}", f"n {g.num_nodes}"]
    for idx in range(1, g.num_nodes + 1):
        lines.append(f"v {idx} {g.node_label(idx)}")
    for i, j, lab in g.edges:
        lines.append(f"e {i} {j} {lab}")
    return "\n".join(lines) + "\n"


def _gxl_label(element: ET.Element, owner: str) -> str:
    attrs = element.findall("attr")
    if not attrs:
        return "_"
    if len(attrs) > 1:
        names = ", ".join(a.get("name", "?") for a in attrs[1:])
        warnings.warn(
            f"{owner}: ignoring extra attributes ({names}); "
            f"the first declared attribute becomes the label"
        )
    text = "".join(attrs[0].itertext()).strip()
    return text if text else "_"


def parse_gxl_subset(data: bytes | str) -> LabeledGraph:
    """Parse one graph from a GXL document (subset: ids, labels, edges)."""
    try:
        root = ET.fromstring(_decode(data))
    except ET.ParseError as exc:
        raise GraphFormatError(f"not well-formed XML: {exc}") from exc
    graph_elems = [root] if root.tag == "graph" else root.findall(".//graph")
    if len(graph_elems) != 1:
        raise GraphFormatError(
            f"expected exactly one <graph> element, found {len(graph_elems)}"
        )
    graph_elem = graph_elems[0]
    graph_id = graph_elem.get("id", "graph")

    labels: list[str] = []
    index_of: dict[str, int] = {}
    for node in graph_elem.findall("node"):
        node_id = node.get("id")
        if node_id is None:
            raise GraphFormatError("<node> element without an id attribute")
        if node_id in index_of:
            raise GraphFormatError(f"duplicate node id {node_id!r}")
        index_of[node_id] = len(labels) + 1
        labels.append(_gxl_label(node, f"node {node_id!r}"))

    edges: list[tuple[int, int, str]] = []
    seen: set[tuple[int, int]] = set()
    for edge in graph_elem.findall("edge"):
        src = edge.get("from")
        dst = edge.get("to")
        if src is None or dst is None:
            raise GraphFormatError("<edge> element without from/to attributes")
        if src not in index_of or dst not in index_of:
            missing = src if src not in index_of else dst
            raise GraphFormatError(f"edge references unknown node id {missing!r}")
        i, j = index_of[src], index_of[dst]
        if i == j:
            raise GraphFormatError(f"self-loop at node id {src!r} not allowed")
        key = (i, j) if i < j else (j, i)
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge between {src!r} and {dst!r}")
        seen.add(key)
        edges.append((i, j, _gxl_label(edge, f"edge {src!r}->{dst!r}")))
    return LabeledGraph(graph_id, labels, edges)


def _alphabet(size: int) -> list[str]:
    if size < 1:
        raise ValueError(f"alphabet size must be at least 1, got {size}")
    letters = list(string.ascii_lowercase)
    return [letters[i] if i < 26 else f"l{i}" for i in range(size)]


def generate_synthetic(
    num_nodes: int,
    edge_density: float,
    label_alphabet_size: int,
    seed: int = 0,
    graph_id: str | None = None,
) -> LabeledGraph:
    """Seeded random graph with the requested size, density, and alphabet.

    Each of the n*(n-1)/2 node pairs carries an edge with probability
    ``edge_density``; node and edge labels are drawn uniformly from the
    same alphabet.
    """
    if num_nodes < 0:
        raise ValueError(f"num_nodes must be nonnegative, got {num_nodes}")
    if not (0.0 <= edge_density <= 1.0):
        raise ValueError(f"edge_density must lie in [0, 1], got {edge_density}")
    alphabet = _alphabet(label_alphabet_size)
    rng = random.Random(seed)
    labels = [rng.choice(alphabet) for _ in range(num_nodes)]
    edges = []
    for i in range(1, num_nodes + 1):
        for j in range(i + 1, num_nodes + 1):
            if rng.random() < edge_density:
                edges.append((i, j, rng.choice(alphabet)))
    return LabeledGraph(
        graph_id if graph_id is not None else f"synthetic-{seed}", labels, edges
    )


def load_cost_table(path: str | Path) -> EditCostModel:
    """Load a tabulated cost model from a JSON file.

    Expected shape (all parts optional, defaults default to 1)::

        {"node": {"sub_default": 3, "del_default": 1, "ins_default": 1,
                  "sub": {"a|b": 2.5}, "del": {"c": 2}, "ins": {}},
         "edge": {...}}

    Substitution keys are "<label>|<label>" pairs, looked up in both
    orders; equal labels cost 0 unless listed explicitly.
    """
    with open(path, "r", encoding="utf-8") as handle:
        raw = json.load(handle)
    if not isinstance(raw, dict):
        raise ValueError(f"cost table {path}: top level must be an object")

    def sub_table(section: dict, kind: str) -> dict[tuple[str, str], float]:
        table = section.get("sub", {})
        if not isinstance(table, dict):
            raise ValueError(f"cost table {path}: {kind}.sub must be an object")
        out: dict[tuple[str, str], float] = {}
        for key, value in table.items():
            parts = key.split("|")
            if len(parts) != 2:
                raise ValueError(
                    f"cost table {path}: bad {kind}.sub key {key!r} "
                    f"(expected 'label|label')"
                )
            out[(parts[0], parts[1])] = float(value)
        return out

    def unary_table(section: dict, kind: str, op: str) -> dict[str, float]:
        table = section.get(op, {})
        if not isinstance(table, dict):
            raise ValueError(f"cost table {path}: {kind}.{op} must be an object")
        return {str(k): float(v) for k, v in table.items()}

    node = raw.get("node", {})
    edge = raw.get("edge", {})
    return EditCostModel.tabulated(
        node_sub=sub_table(node, "node"),
        node_del=unary_table(node, "node", "del"),
        node_ins=unary_table(node, "node", "ins"),
        edge_sub=sub_table(edge, "edge"),
        edge_del=unary_table(edge, "edge", "del"),
        edge_ins=unary_table(edge, "edge", "ins"),
        node_sub_default=float(node.get("sub_default", 1.0)),
        node_del_default=float(node.get("del_default", 1.0)),
        node_ins_default=float(node.get("ins_default", 1.0)),
        edge_sub_default=float(edge.get("sub_default", 1.0)),
        edge_del_default=float(edge.get("del_default", 1.0)),
        edge_ins_default=float(edge.get("ins_default", 1.0)),
    )
