"""Quadratic formulation of graph edit distance and the IPFP local search.

The edit cost of a node map is a quadratic form over its 0/1 matrix
representation: an implicit symmetric matrix D holds node edit costs on
the diagonal and half an edge edit cost for every pair of assignments.
IPFP performs Frank-Wolfe style descent on that form: it linearizes at the
current (fractional) point, solves the resulting LSAPE instance, takes the
best convex step along the segment, and finally projects back to a binary
node map.

D is never materialized; linearization is computed from per-label
adjacency matrices, which keeps the memory at the size of one fractional
map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lsape import ExtendedCostMatrix, lsape_solve
from .model import (
    DUMMY,
    EditCostModel,
    LabeledGraph,
    NodeMap,
    induced_cost,
)
from .tables import build_pair_tables


@dataclass(frozen=True, eq=False)
class FractionalMap:
    """Doubly-stochastic-with-slack matrix of shape (n+1, m+1).

    Rows 0..n-1 sum to 1 and columns 0..m-1 sum to 1; the dummy row and
    column absorb the slack (deletions and insertions) and the corner stays
    0.  A binary instance is exactly the matrix form of a node map.
    """

    matrix: np.ndarray

    def __init__(self, matrix: np.ndarray):
        arr = np.asarray(matrix, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"fractional map needs shape (n+1, m+1), got {arr.shape}")
        tol = 1e-6
        if arr.min() < -tol or arr.max() > 1.0 + tol:
            raise ValueError("fractional map entries must lie in [0, 1]")
        n = arr.shape[0] - 1
        m = arr.shape[1] - 1
        if n and not np.allclose(arr[:n, :].sum(axis=1), 1.0, atol=tol):
            raise ValueError("each source row must sum to 1")
        if m and not np.allclose(arr[:, :m].sum(axis=0), 1.0, atol=tol):
            raise ValueError("each target column must sum to 1")
        object.__setattr__(self, "matrix", arr)

    @classmethod
    def from_node_map(cls, pi: NodeMap) -> "FractionalMap":
        return cls(_binary_matrix(pi))

    @property
    def num_source_nodes(self) -> int:
        return self.matrix.shape[0] - 1

    @property
    def num_target_nodes(self) -> int:
        return self.matrix.shape[1] - 1

    def is_binary(self, tol: float = 1e-9) -> bool:
        arr = self.matrix
        return bool(np.all((np.abs(arr) <= tol) | (np.abs(arr - 1.0) <= tol)))

    def to_node_map(self) -> NodeMap:
        """The node map a binary fractional map represents."""
        if not self.is_binary():
            raise ValueError("fractional map is not binary")
        return _matrix_to_node_map(self.matrix)


def _binary_matrix(pi: NodeMap) -> np.ndarray:
    n = len(pi.forward)
    m = len(pi.backward)
    x = np.zeros((n + 1, m + 1), dtype=np.float64)
    for i, k in enumerate(pi.forward):
        if k == DUMMY:
            x[i, m] = 1.0
        else:
            x[i, k - 1] = 1.0
    for k, i in enumerate(pi.backward):
        if i == DUMMY:
            x[n, k] = 1.0
    return x


def _matrix_to_node_map(x: np.ndarray) -> NodeMap:
    n = x.shape[0] - 1
    m = x.shape[1] - 1
    forward = [DUMMY] * n
    for i in range(n):
        k = int(np.argmax(x[i, :]))
        if k < m and x[i, k] > 0.5:
            forward[i] = k + 1
    return NodeMap.from_forward(forward, m)


class QuadraticModel:
    """Implicit quadratic cost matrix for one graph pair.

    The diagonal entry of an assignment (i, k) is its node edit cost; the
    entry of a pair of assignments is half the edit cost of the edge pair
    they induce (substitution when both edges exist, deletion or insertion
    when only one does, 0 otherwise).  The half on off-diagonal entries
    makes the quadratic form of a binary map equal its induced cost, since
    every unordered pair is visited twice.
    """

    def __init__(self, g: LabeledGraph, h: LabeledGraph, costs: EditCostModel):
        self.g = g
        self.h = h
        self.costs = costs
        tables = build_pair_tables(g, h, costs)
        self.n = tables.n
        self.m = tables.m
        self.node_cost = tables.node_cost
        self._glab = tables.glab
        self._hlab = tables.hlab
        self._esub = tables.esub
        self._edel = tables.edel
        self._eins = tables.eins
        size = len(tables.edge_alphabet)
        n, m = self.n, self.m
        self._a_stack = np.zeros((size, n, n), dtype=np.float64)
        self._b_stack = np.zeros((size, m, m), dtype=np.float64)
        for a in range(size):
            self._a_stack[a] = (tables.glab == a).astype(np.float64)
            self._b_stack[a] = (tables.hlab == a).astype(np.float64)
        self._a_any = (tables.glab >= 0).astype(np.float64)
        self._b_any = (tables.hlab >= 0).astype(np.float64)

    # -- entry-level view (used by the verification tests) ---------------

    def pair_entry(self, first: tuple[int, int], second: tuple[int, int]) -> float:
        """The implicit matrix entry for a pair of assignments.

        Assignments are (source, target) with 1-based indices and DUMMY for
        the dummy node.  Equal assignments give the diagonal (node cost).
        """
        i, k = first
        j, l = second
        n, m = self.n, self.m
        if first == second:
            return float(
                self.node_cost[i - 1 if i != DUMMY else n, k - 1 if k != DUMMY else m]
            )
        g_lab = -1
        if i != DUMMY and j != DUMMY and i != j:
            g_lab = int(self._glab[i - 1, j - 1])
        h_lab = -1
        if k != DUMMY and l != DUMMY and k != l:
            h_lab = int(self._hlab[k - 1, l - 1])
        if g_lab >= 0 and h_lab >= 0:
            return 0.5 * float(self._esub[g_lab, h_lab])
        if g_lab >= 0:
            return 0.5 * float(self._edel[g_lab])
        if h_lab >= 0:
            return 0.5 * float(self._eins[h_lab])
        return 0.0

    # -- vectorized core --------------------------------------------------

    def _linearize_raw(self, x: np.ndarray) -> np.ndarray:
        """D @ vec(x), reshaped to (n+1, m+1); linear in x."""
        n, m = self.n, self.m
        core = x[:n, :m]
        row_total = x[:n, :].sum(axis=1)
        col_total = x[:, :m].sum(axis=0)

        edge = np.zeros((n + 1, m + 1), dtype=np.float64)
        size = self._a_stack.shape[0]
        del_vec = np.zeros(n, dtype=np.float64)
        ins_vec = np.zeros(m, dtype=np.float64)
        cross = np.zeros((n, m), dtype=np.float64)
        for a in range(size):
            ax = self._a_stack[a] @ core
            for b in range(size):
                w = self._esub[a, b]
                if w != 0.0:
                    cross += w * (ax @ self._b_stack[b])
            if self._edel[a] != 0.0:
                del_vec += self._edel[a] * (self._a_stack[a] @ row_total)
                cross -= self._edel[a] * (ax @ self._b_any)
        any_core = self._a_any @ core
        for b in range(size):
            if self._eins[b] != 0.0:
                ins_vec += self._eins[b] * (self._b_stack[b] @ col_total)
                cross -= self._eins[b] * (any_core @ self._b_stack[b])
        edge[:n, :m] = cross + del_vec[:, None] + ins_vec[None, :]
        edge[:n, m] = del_vec
        edge[n, :m] = ins_vec
        return self.node_cost * x + 0.5 * edge


def quadratic_cost(model: QuadraticModel, x: FractionalMap | np.ndarray) -> float:
    """Value of the quadratic form at ``x``.

    For binary ``x`` this equals the induced cost of the node map it
    represents.
    """
    arr = x.matrix if isinstance(x, FractionalMap) else np.asarray(x, dtype=np.float64)
    return float(np.sum(arr * model._linearize_raw(arr)))


def linearize(model: QuadraticModel, x: FractionalMap) -> ExtendedCostMatrix:
    """Gradient-like LSAPE instance at ``x``: entry (i,k) = (D vec(x))[i,k].

    Equal to half the gradient of :func:`quadratic_cost`, by symmetry of D.
    """
    return ExtendedCostMatrix(model._linearize_raw(x.matrix))


def minimize_unit_quadratic(quad_coef: float, lin_coef: float) -> float:
    """Minimizer over [0, 1] of q(a) = quad_coef*a^2 + lin_coef*a + const."""
    if quad_coef > 0.0:
        return min(1.0, max(0.0, -lin_coef / (2.0 * quad_coef)))
    # Concave or linear: an endpoint wins; q(1) - q(0) = quad + lin.
    return 1.0 if quad_coef + lin_coef < 0.0 else 0.0


def line_search_alpha(
    model: QuadraticModel, x: FractionalMap, b: FractionalMap
) -> float:
    """Exact minimizer of the form along the segment from x to b."""
    direction = b.matrix - x.matrix
    l_dir = model._linearize_raw(direction)
    l_x = model._linearize_raw(x.matrix)
    quad = float(np.sum(direction * l_dir))
    lin = 2.0 * float(np.sum(direction * l_x))
    return minimize_unit_quadratic(quad, lin)


def project_to_integral(x: FractionalMap) -> NodeMap:
    """Binary map of maximal overlap with ``x`` (LSAPE on negated mass)."""
    pi, _ = lsape_solve(ExtendedCostMatrix(-x.matrix))
    return pi


def ipfp(
    g: LabeledGraph,
    h: LabeledGraph,
    pi_init: NodeMap,
    costs: EditCostModel,
    epsilon: float = 1e-3,
    max_iterations: int = 100,
    *,
    model: QuadraticModel | None = None,
    on_incumbent=None,
) -> NodeMap:
    """Descend on the quadratic form from a binary starting map.

    Each iteration linearizes at the current point, solves the LSAPE
    instance, keeps the cheapest binary solution seen so far, and moves by
    the optimal convex step.  Stops when the relative gap between the
    current value and the linearized optimum drops below ``epsilon`` or
    after ``max_iterations``.  The final point is projected to the closest
    binary map, and the cheaper of projection and incumbent is returned;
    it never costs more than ``pi_init``.
    """
    if model is None:
        model = QuadraticModel(g, h, costs)
    best = pi_init.copy()
    if best.cached_cost is None:
        induced_cost(g, h, best, costs)
    best_cost = best.cached_cost

    x = _binary_matrix(pi_init)
    for _ in range(max_iterations):
        l_x = model._linearize_raw(x)
        current = float(np.sum(x * l_x))
        if current < 1e-12:
            break
        b_map, lin_obj = lsape_solve(ExtendedCostMatrix(l_x))
        b = _binary_matrix(b_map)
        cand_cost = induced_cost(g, h, b_map, costs)
        if cand_cost < best_cost:
            best = b_map
            best_cost = cand_cost
        if on_incumbent is not None:
            on_incumbent(best_cost)
        if abs(current - lin_obj) / current < epsilon:
            break
        direction = b - x
        l_dir = model._linearize_raw(direction)
        quad = float(np.sum(direction * l_dir))
        lin = 2.0 * float(np.sum(direction * l_x))
        alpha = minimize_unit_quadratic(quad, lin)
        if alpha <= 0.0:
            break
        x = x + alpha * direction

    projected = project_to_integral(FractionalMap(x))
    proj_cost = induced_cost(g, h, projected, costs)
    if proj_cost < best_cost:
        best = projected
        best_cost = proj_cost
    best.cached_cost = best_cost
    return best
