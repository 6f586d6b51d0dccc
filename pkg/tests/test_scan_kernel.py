"""The compiled 2-swap scan must match the pure-Python scan exactly."""

from __future__ import annotations

import random

import pytest

from gedsearch import (
    EditCostModel,
    KRefineConfig,
    NodeMap,
    generate_initial_maps,
    generate_synthetic,
    induced_cost,
    k_refine,
    swap_cost_localized,
)
from gedsearch._scan2 import NUMBA_AVAILABLE
from gedsearch.refine import _kernel_best_swap, _python_best_swap
from gedsearch.tables import build_pair_tables

pytestmark = pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")


@pytest.mark.parametrize("trial", range(15))
def test_best_swap_matches_python_scan(trial):
    rng = random.Random(trial)
    costs = EditCostModel.constant(*rng.choice([(1, 1, 1), (3, 1, 1), (1, 2, 3)]))
    g = generate_synthetic(rng.randint(1, 7), rng.uniform(0.1, 0.9), 2, seed=trial, graph_id="g")
    h = generate_synthetic(rng.randint(1, 7), rng.uniform(0.1, 0.9), 2, seed=trial + 90, graph_id="h")
    tables = build_pair_tables(g, h, costs)
    for pi in generate_initial_maps(g, h, 4, "random", seed=trial):
        pi.contains_dummy_pair = rng.random() < 0.5
        induced_cost(g, h, pi, costs)
        kernel_delta, kernel_cycle = _kernel_best_swap(pi, tables)
        python_delta, python_cycle = _python_best_swap(
            g, h, pi, 2, costs, swap_cost_localized
        )
        if python_cycle is None:
            assert kernel_cycle is None
        else:
            assert kernel_delta == pytest.approx(python_delta, abs=1e-9)
            assert kernel_cycle == python_cycle


@pytest.mark.parametrize("trial", range(5))
def test_full_search_identical_with_and_without_kernel(trial, monkeypatch):
    """Disabling the kernel must not change any k-refine result."""
    import gedsearch.refine as refine_module

    g = generate_synthetic(9, 0.35, 3, seed=trial, graph_id="g")
    h = generate_synthetic(8, 0.45, 3, seed=trial + 10, graph_id="h")
    costs = EditCostModel.constant(3, 1, 1)
    pi = generate_initial_maps(g, h, 1, "random", seed=trial)[0]
    config = KRefineConfig(2, True, "localized")
    with_kernel = k_refine(g, h, pi.copy(), costs, config)
    monkeypatch.setattr(refine_module._scan2, "NUMBA_AVAILABLE", False)
    without_kernel = k_refine(g, h, pi.copy(), costs, config)
    assert with_kernel.forward == without_kernel.forward
    assert with_kernel.cached_cost == pytest.approx(
        without_kernel.cached_cost, abs=1e-9
    )


def test_single_node_dummy_split_found_by_kernel(heavy_sub_costs):
    from conftest import make_graph

    g = make_graph("g", "a")
    h = make_graph("h", "b")
    pi = NodeMap.identity(1)
    pi.contains_dummy_pair = True
    induced_cost(g, h, pi, heavy_sub_costs)
    tables = build_pair_tables(g, h, heavy_sub_costs)
    delta, cycle = _kernel_best_swap(pi, tables)
    assert delta == pytest.approx(-1.0)
    assert cycle is not None
