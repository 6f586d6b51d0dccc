from __future__ import annotations

import pytest

from gedsearch import EditCostModel, LabeledGraph


def make_graph(graph_id, labels, edges=()):
    return LabeledGraph(graph_id, list(labels), list(edges))


@pytest.fixture
def unit_costs():
    return EditCostModel.constant(1, 1, 1)


@pytest.fixture
def heavy_sub_costs():
    """Substitution (3) costs more than deletion plus insertion (1 + 1)."""
    return EditCostModel.constant(3, 1, 1)
