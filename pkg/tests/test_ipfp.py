from __future__ import annotations

import itertools
import random

import numpy as np
import pytest

from gedsearch import (
    DUMMY,
    EditCostModel,
    FractionalMap,
    NodeMap,
    QuadraticModel,
    enumerate_node_maps,
    exact_ged,
    generate_initial_maps,
    generate_synthetic,
    induced_cost,
    ipfp,
    validate_node_map,
)
from gedsearch.ipfp import (
    line_search_alpha,
    linearize,
    minimize_unit_quadratic,
    project_to_integral,
    quadratic_cost,
)
from conftest import make_graph


class TestFractionalMap:
    def test_from_node_map_is_binary(self):
        pi = NodeMap.from_forward([2, DUMMY], 2)
        x = FractionalMap.from_node_map(pi)
        assert x.is_binary()
        assert x.matrix[0, 1] == 1.0  # node 1 -> target 2
        assert x.matrix[1, 2] == 1.0  # node 2 deleted
        assert x.matrix[2, 0] == 1.0  # target 1 inserted

    def test_round_trip_to_node_map(self):
        pi = NodeMap.from_forward([DUMMY, 1], 3)
        back = FractionalMap.from_node_map(pi).to_node_map()
        assert back.forward == pi.forward
        assert back.backward == pi.backward

    def test_row_sum_violation_rejected(self):
        bad = np.zeros((2, 2))
        with pytest.raises(ValueError):
            FractionalMap(bad)

    def test_fractional_point_is_accepted(self):
        x = FractionalMap(np.array([[0.5, 0.5], [0.5, 0.0]]))
        assert not x.is_binary()


class TestQuadraticModel:
    def test_entry_view_is_symmetric(self, heavy_sub_costs):
        g = make_graph("g", "ab", [(1, 2, "x")])
        h = make_graph("h", "ba", [(1, 2, "y")])
        model = QuadraticModel(g, h, heavy_sub_costs)
        slots = [(i, k) for i in (1, 2, DUMMY) for k in (1, 2, DUMMY)]
        for first, second in itertools.product(slots, slots):
            assert model.pair_entry(first, second) == model.pair_entry(second, first)

    def test_diagonal_is_node_cost(self, heavy_sub_costs):
        g = make_graph("g", "a")
        h = make_graph("h", "b")
        model = QuadraticModel(g, h, heavy_sub_costs)
        assert model.pair_entry((1, 1), (1, 1)) == 3.0
        assert model.pair_entry((1, DUMMY), (1, DUMMY)) == 1.0
        assert model.pair_entry((DUMMY, 1), (DUMMY, 1)) == 1.0

    def test_off_diagonal_is_half_edge_cost(self, heavy_sub_costs):
        g = make_graph("g", "abc", [(1, 2, "x")])
        h = make_graph("h", "ab", [(1, 2, "y")])
        model = QuadraticModel(g, h, heavy_sub_costs)
        # both edges exist with different labels: half of substitution cost
        assert model.pair_entry((1, 1), (2, 2)) == pytest.approx(1.5)
        # only the source edge exists: half of deletion cost
        assert model.pair_entry((1, 1), (2, DUMMY)) == pytest.approx(0.5)
        # only the target edge exists: half of insertion cost
        assert model.pair_entry((1, 1), (3, 2)) == pytest.approx(0.5)
        # neither edge exists
        assert model.pair_entry((1, 1), (3, DUMMY)) == 0.0

    def test_linearize_matches_dense_matrix_product(self, heavy_sub_costs):
        rng = random.Random(4)
        for trial in range(5):
            n, m = rng.randint(1, 4), rng.randint(1, 4)
            g = generate_synthetic(n, 0.6, 2, seed=trial, graph_id="g")
            h = generate_synthetic(m, 0.6, 2, seed=trial + 40, graph_id="h")
            model = QuadraticModel(g, h, heavy_sub_costs)
            slots = [
                (i, k)
                for i in list(range(1, n + 1)) + [DUMMY]
                for k in list(range(1, m + 1)) + [DUMMY]
            ]
            dense = np.array(
                [[model.pair_entry(p, q) for q in slots] for p in slots]
            )
            x = np.random.default_rng(trial).uniform(0, 1, (n + 1, m + 1))
            via_entries = (dense @ x.reshape(-1)).reshape(n + 1, m + 1)
            assert model._linearize_raw(x) == pytest.approx(via_entries, abs=1e-9)


class TestQuadraticCost:
    def test_identity_on_identical_graphs(self, heavy_sub_costs):
        g = make_graph("g", "ab", [(1, 2, "x")])
        model = QuadraticModel(g, g, heavy_sub_costs)
        x = FractionalMap.from_node_map(NodeMap.identity(2))
        assert quadratic_cost(model, x) == pytest.approx(0.0)

    @pytest.mark.parametrize("trial", range(8))
    def test_equals_induced_cost_on_every_map(self, trial, heavy_sub_costs):
        rng = random.Random(trial)
        g = generate_synthetic(rng.randint(1, 4), 0.6, 2, seed=trial, graph_id="g")
        h = generate_synthetic(rng.randint(1, 4), 0.6, 2, seed=trial + 20, graph_id="h")
        model = QuadraticModel(g, h, heavy_sub_costs)
        for pi in enumerate_node_maps(g, h):
            expected = induced_cost(g, h, pi, heavy_sub_costs)
            got = quadratic_cost(model, FractionalMap.from_node_map(pi))
            assert got == pytest.approx(expected, abs=1e-9)


class TestLinearize:
    def test_zero_point_gives_zero_matrix(self, unit_costs):
        g = make_graph("g", "ab", [(1, 2, "x")])
        h = make_graph("h", "ab")
        model = QuadraticModel(g, h, unit_costs)
        zero = np.zeros((3, 3))
        assert np.allclose(model._linearize_raw(zero), 0.0)

    def test_scaling_is_linear(self, unit_costs):
        g = generate_synthetic(3, 0.7, 2, seed=1, graph_id="g")
        h = generate_synthetic(3, 0.7, 2, seed=2, graph_id="h")
        model = QuadraticModel(g, h, unit_costs)
        x = np.random.default_rng(0).uniform(0, 1, (4, 4))
        assert model._linearize_raw(2.0 * x) == pytest.approx(
            2.0 * model._linearize_raw(x), abs=1e-12
        )

    @pytest.mark.parametrize("trial", range(5))
    def test_half_gradient_by_finite_differences(self, trial, heavy_sub_costs):
        rng = random.Random(trial)
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        g = generate_synthetic(n, 0.6, 2, seed=trial, graph_id="g")
        h = generate_synthetic(m, 0.6, 2, seed=trial + 60, graph_id="h")
        model = QuadraticModel(g, h, heavy_sub_costs)
        x = np.random.default_rng(trial).uniform(0, 1, (n + 1, m + 1))
        gradient_half = model._linearize_raw(x)
        step = 1e-6
        for p in range(n + 1):
            for q in range(m + 1):
                plus = x.copy()
                plus[p, q] += step
                minus = x.copy()
                minus[p, q] -= step
                numeric = (
                    quadratic_cost(model, plus) - quadratic_cost(model, minus)
                ) / (2 * step)
                assert numeric == pytest.approx(
                    2.0 * gradient_half[p, q], abs=1e-4
                )


class TestLineSearch:
    def test_interior_vertex(self):
        assert minimize_unit_quadratic(2.0, -2.0) == pytest.approx(0.5)

    def test_vertex_clamped_to_zero(self):
        assert minimize_unit_quadratic(1.0, 3.0) == 0.0

    def test_concave_picks_better_endpoint(self):
        assert minimize_unit_quadratic(-1.0, -1.0) == 1.0
        assert minimize_unit_quadratic(-1.0, 2.0) == 0.0

    def test_alpha_minimizes_along_segment(self, heavy_sub_costs):
        g = generate_synthetic(4, 0.5, 2, seed=3, graph_id="g")
        h = generate_synthetic(4, 0.5, 2, seed=4, graph_id="h")
        model = QuadraticModel(g, h, heavy_sub_costs)
        a, b = generate_initial_maps(g, h, 2, "random", seed=8)
        xa = FractionalMap.from_node_map(a)
        xb = FractionalMap.from_node_map(b)
        alpha = line_search_alpha(model, xa, xb)
        best = quadratic_cost(model, xa.matrix + alpha * (xb.matrix - xa.matrix))
        for probe in np.linspace(0, 1, 21):
            value = quadratic_cost(model, xa.matrix + probe * (xb.matrix - xa.matrix))
            assert best <= value + 1e-9


class TestProjection:
    def test_binary_point_projects_to_itself(self):
        pi = NodeMap.from_forward([2, DUMMY], 2)
        projected = project_to_integral(FractionalMap.from_node_map(pi))
        assert projected.forward == pi.forward

    def test_dominant_mass_wins(self):
        x = np.array(
            [
                [0.9, 0.05, 0.05],
                [0.05, 0.9, 0.05],
                [0.05, 0.05, 0.0],
            ]
        )
        projected = project_to_integral(FractionalMap(x))
        assert projected.forward == [1, 2]


class TestIpfp:
    def test_zero_cost_input_converges_immediately(self, heavy_sub_costs):
        g = make_graph("g", "ab", [(1, 2, "x")])
        out = ipfp(g, g, NodeMap.identity(2), heavy_sub_costs)
        assert out.cached_cost == 0.0

    def test_single_node_finds_delete_insert(self, heavy_sub_costs):
        g = make_graph("g", "a")
        h = make_graph("h", "b")
        out = ipfp(g, h, NodeMap.identity(1), heavy_sub_costs)
        assert out.cached_cost == pytest.approx(2.0)

    @pytest.mark.parametrize("trial", range(10))
    def test_never_worse_than_input_and_sound(self, trial, heavy_sub_costs):
        rng = random.Random(trial)
        g = generate_synthetic(rng.randint(1, 5), 0.5, 2, seed=trial, graph_id="g")
        h = generate_synthetic(rng.randint(1, 5), 0.5, 2, seed=trial + 30, graph_id="h")
        value, _ = exact_ged(g, h, heavy_sub_costs)
        pi = generate_initial_maps(g, h, 1, "random", seed=trial)[0]
        start = induced_cost(g, h, pi, heavy_sub_costs)
        out = ipfp(g, h, pi, heavy_sub_costs)
        assert validate_node_map(g, h, out)
        assert value - 1e-9 <= out.cached_cost <= start + 1e-9

    @pytest.mark.parametrize("trial", range(6))
    def test_incumbent_never_increases(self, trial, unit_costs):
        g = generate_synthetic(8, 0.4, 3, seed=trial, graph_id="g")
        h = generate_synthetic(8, 0.4, 3, seed=trial + 80, graph_id="h")
        pi = generate_initial_maps(g, h, 1, "random", seed=trial)[0]
        incumbents: list[float] = []
        ipfp(g, h, pi, unit_costs, on_incumbent=incumbents.append)
        assert all(b <= a for a, b in zip(incumbents, incumbents[1:]))
