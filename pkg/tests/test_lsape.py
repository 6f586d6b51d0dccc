from __future__ import annotations

import numpy as np
import pytest

from gedsearch import (
    ExtendedCostMatrix,
    lsape_bruteforce,
    lsape_solve,
    validate_node_map,
)
from conftest import make_graph


def matrix(rows):
    return ExtendedCostMatrix(np.asarray(rows, dtype=np.float64))


class TestExtendedCostMatrix:
    def test_corner_must_be_zero(self):
        with pytest.raises(ValueError):
            matrix([[1.0, 1.0], [1.0, 5.0]])

    def test_entries_must_be_finite(self):
        with pytest.raises(ValueError):
            matrix([[np.inf, 1.0], [1.0, 0.0]])

    def test_must_be_two_dimensional(self):
        with pytest.raises(ValueError):
            ExtendedCostMatrix(np.zeros(4))


class TestSolveSmallInstances:
    def test_delete_insert_cheaper_than_substitution(self):
        # one row, one column: sub=3 against del=1 + ins=1
        c = matrix([[3.0, 1.0], [1.0, 0.0]])
        pi, value = lsape_solve(c)
        assert value == pytest.approx(2.0)
        assert pi.forward == [0]
        assert lsape_bruteforce(c)[1] == pytest.approx(2.0)

    def test_all_zero_matrix(self):
        c = matrix([[0.0] * 4 for _ in range(4)])
        _, value = lsape_solve(c)
        assert value == pytest.approx(0.0)

    def test_identity_substitutions_win(self):
        c = matrix(
            [
                [0.0, 9.0, 5.0],
                [9.0, 0.0, 5.0],
                [5.0, 5.0, 0.0],
            ]
        )
        pi, value = lsape_solve(c)
        assert value == pytest.approx(0.0)
        assert pi.forward == [1, 2]
        assert lsape_bruteforce(c)[1] == pytest.approx(0.0)

    def test_objective_equals_sum_of_chosen_entries(self):
        rng = np.random.default_rng(5)
        entries = rng.uniform(0, 4, (4, 3))
        entries[3, 2] = 0.0
        c = ExtendedCostMatrix(entries)
        pi, value = lsape_solve(c)
        total = 0.0
        for i, k in enumerate(pi.forward, start=1):
            total += entries[i - 1, k - 1 if k else 2]
        for k, i in enumerate(pi.backward, start=1):
            if not i:
                total += entries[3, k - 1]
        assert value == pytest.approx(total, abs=1e-9)

    def test_solution_is_a_valid_node_map(self):
        g = make_graph("g", "abc")
        h = make_graph("h", "ab")
        rng = np.random.default_rng(9)
        entries = rng.uniform(0, 4, (4, 3))
        entries[3, 2] = 0.0
        pi, _ = lsape_solve(ExtendedCostMatrix(entries))
        assert validate_node_map(g, h, pi)


class TestAgainstBruteForce:
    @pytest.mark.parametrize("trial", range(60))
    def test_objectives_match(self, trial):
        rng = np.random.default_rng(trial)
        n = int(rng.integers(1, 6))
        m = int(rng.integers(1, 6))
        entries = np.round(rng.uniform(0, 5, (n + 1, m + 1)), 3)
        entries[n, m] = 0.0
        c = ExtendedCostMatrix(entries)
        _, fast = lsape_solve(c)
        _, slow = lsape_bruteforce(c)
        assert fast == pytest.approx(slow, abs=1e-9)

    def test_bruteforce_size_guard(self):
        entries = np.zeros((7, 7))
        with pytest.raises(ValueError):
            lsape_bruteforce(ExtendedCostMatrix(entries))

    @pytest.mark.parametrize("trial", range(10))
    def test_row_shift_moves_objective_by_constant(self, trial):
        rng = np.random.default_rng(100 + trial)
        n, m = 4, 4
        entries = rng.uniform(0, 5, (n + 1, m + 1))
        entries[n, m] = 0.0
        base = lsape_solve(ExtendedCostMatrix(entries))[1]
        shifted = entries.copy()
        shifted[1, :] += 2.5
        assert lsape_solve(ExtendedCostMatrix(shifted))[1] == pytest.approx(
            base + 2.5, abs=1e-9
        )
