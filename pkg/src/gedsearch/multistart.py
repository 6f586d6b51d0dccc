"""Multi-start local search and score-guided stochastic restarts.

A round runs the chosen local search from ``kappa`` initial node maps and
keeps the first ``ceil(rho * kappa)`` results.  The restart framework then
scores every assignment by how often it appears in the converged maps
(weighted by solution quality), samples fresh initial maps from those
scores, and repeats; good partial assignments accumulate weight and get
recombined, driving the upper bound down over the loops.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from ._seeds import derive_seed
from .lsape import ExtendedCostMatrix, lsape_solve
from .model import DUMMY, EditCostModel, LabeledGraph, NodeMap
from .tables import build_pair_tables

#: Weight cap used when an improved map's cost already sits on the lower bound.
WEIGHT_CAP = 1e6

LocalSearch = Callable[[LabeledGraph, LabeledGraph, NodeMap], NodeMap]

_STRATEGIES = ("random", "node-lsape", "mixed")


@dataclass(frozen=True, eq=False)
class ScoresMatrix:
    """Nonnegative assignment scores of shape (n+1, m+1).

    Cell (i, k) scores the substitution of source node i+1 by target node
    k+1; the last column scores deletions, the last row insertions.
    """

    matrix: np.ndarray

    def __init__(self, matrix: np.ndarray):
        arr = np.asarray(matrix, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"scores matrix needs shape (n+1, m+1), got {arr.shape}")
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0:
            raise ValueError("scores must be finite and nonnegative")
        object.__setattr__(self, "matrix", arr)

    @classmethod
    def zeros(cls, num_source_nodes: int, num_target_nodes: int) -> "ScoresMatrix":
        return cls(np.zeros((num_source_nodes + 1, num_target_nodes + 1)))

    @property
    def num_source_nodes(self) -> int:
        return self.matrix.shape[0] - 1

    @property
    def num_target_nodes(self) -> int:
        return self.matrix.shape[1] - 1


@dataclass(frozen=True)
class MultistartConfig:
    """Parameters of one multi-start / restart run.

    ``kappa`` initial maps per round, of which the first ceil(rho * kappa)
    converged results are kept; ``num_loops`` score-guided restart rounds
    after the initial one; ``eta`` balances plain counting (0) against
    quality weighting (1) in the score update; ``lower_bound`` is an
    optional externally supplied bound used only for that weighting.
    """

    kappa: int = 40
    rho: float = 1.0
    num_loops: int = 0
    eta: float = 0.5
    lower_bound: float = 0.0
    seed: int = 0
    init_strategy: str = "random"
    mode: str = "deterministic"
    workers: int | None = None

    def __post_init__(self):
        if self.kappa < 1:
            raise ValueError(f"kappa must be at least 1, got {self.kappa}")
        if not (0.0 < self.rho <= 1.0):
            raise ValueError(f"rho must lie in (0, 1], got {self.rho}")
        if self.num_loops < 0:
            raise ValueError(f"num_loops must be nonnegative, got {self.num_loops}")
        if not (0.0 <= self.eta <= 1.0):
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        if self.lower_bound < 0.0:
            raise ValueError(f"lower_bound must be nonnegative, got {self.lower_bound}")
        if self.init_strategy not in _STRATEGIES:
            raise ValueError(
                f"init_strategy must be one of {_STRATEGIES}, got {self.init_strategy!r}"
            )
        if self.mode not in ("deterministic", "parallel"):
            raise ValueError(f"mode must be deterministic or parallel, got {self.mode!r}")


@dataclass(frozen=True)
class LoopStats:
    """Upper bound and wall time of one restart loop (loop 0 = initial round)."""

    loop: int
    upper_bound: float
    seconds: float


def _random_map(n: int, m: int, rng: random.Random) -> NodeMap:
    available = list(range(1, m + 1))
    forward = [DUMMY] * n
    order = list(range(1, n + 1))
    rng.shuffle(order)
    for i in order:
        pick = rng.randrange(len(available) + 1)
        if pick < len(available):
            forward[i - 1] = available.pop(pick)
    return NodeMap.from_forward(forward, m)


def _node_lsape_map(
    g: LabeledGraph,
    h: LabeledGraph,
    costs: EditCostModel,
    rng: random.Random | None,
) -> NodeMap:
    """Assignment optimal for node costs alone, ignoring edges.

    With an rng, rows and columns are solved in a random order so that
    among tied optima different ones can surface; the objective is
    unaffected.
    """
    node_cost = build_pair_tables(g, h, costs).node_cost
    n, m = g.num_nodes, h.num_nodes
    if rng is None:
        pi, _ = lsape_solve(ExtendedCostMatrix(node_cost))
        return pi
    row_perm = list(range(n))
    col_perm = list(range(m))
    rng.shuffle(row_perm)
    rng.shuffle(col_perm)
    shuffled = node_cost[np.ix_(row_perm + [n], col_perm + [m])]
    pi, _ = lsape_solve(ExtendedCostMatrix(shuffled))
    forward = [DUMMY] * n
    for pos, i in enumerate(row_perm):
        k = pi.forward[pos]
        if k != DUMMY:
            forward[i] = col_perm[k - 1] + 1
    return NodeMap.from_forward(forward, m)


def generate_initial_maps(
    g: LabeledGraph,
    h: LabeledGraph,
    count: int,
    strategy: str = "random",
    seed: int = 0,
    *,
    costs: EditCostModel | None = None,
) -> list[NodeMap]:
    """Seeded initial node maps for a multi-start round.

    Strategies: ``random`` draws injective partial matchings uniformly;
    ``node-lsape`` solves the node-cost-only assignment, shuffling ties for
    diversity; ``mixed`` puts one unperturbed node-cost solution first and
    fills up with random maps.  The lsape-based strategies need ``costs``.
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    if strategy not in _STRATEGIES:
        raise ValueError(f"strategy must be one of {_STRATEGIES}, got {strategy!r}")
    if strategy != "random" and costs is None:
        raise ValueError(f"strategy {strategy!r} needs a cost model")
    rng = random.Random(derive_seed(seed, "init", strategy))
    n, m = g.num_nodes, h.num_nodes
    maps: list[NodeMap] = []
    for index in range(count):
        if strategy == "node-lsape":
            maps.append(_node_lsape_map(g, h, costs, rng if index > 0 else None))
        elif strategy == "mixed" and index == 0:
            maps.append(_node_lsape_map(g, h, costs, None))
        else:
            maps.append(_random_map(n, m, rng))
    return maps


def multistart_run(
    g: LabeledGraph,
    h: LabeledGraph,
    initial_maps: Sequence[NodeMap],
    rho: float,
    algorithm: LocalSearch,
    *,
    mode: str = "deterministic",
    workers: int | None = None,
) -> list[NodeMap]:
    """Run the local search and keep ceil(rho * len(initial_maps)) results.

    Deterministic mode runs the first ones by index sequentially; parallel
    mode launches all starts on a thread pool and keeps the first to
    complete, ignoring stragglers.
    """
    if not initial_maps:
        raise ValueError("need at least one initial map")
    if not (0.0 < rho <= 1.0):
        raise ValueError(f"rho must lie in (0, 1], got {rho}")
    target = math.ceil(rho * len(initial_maps))
    if mode == "deterministic":
        return [algorithm(g, h, pi) for pi in initial_maps[:target]]
    if mode != "parallel":
        raise ValueError(f"mode must be deterministic or parallel, got {mode!r}")
    executor = ThreadPoolExecutor(max_workers=workers)
    try:
        pending = {executor.submit(algorithm, g, h, pi) for pi in initial_maps}
        results: list[NodeMap] = []
        while len(results) < target and pending:
            done, pending = wait(pending, return_when=FIRST_COMPLETED)
            for future in done:
                if len(results) < target:
                    results.append(future.result())
        return results
    finally:
        executor.shutdown(wait=False, cancel_futures=True)


def update_scores(
    m: ScoresMatrix,
    improved: Iterable[NodeMap],
    eta: float,
    lb: float,
    ub: float,
) -> ScoresMatrix:
    """Add each improved map's assignments to the scores, quality-weighted.

    A map of cost c contributes (1 - eta) + eta * (ub - lb) / (c - lb) to
    every cell it occupies; maps sitting on the lower bound contribute the
    capped weight instead of dividing by zero.  Returns a new matrix.
    """
    if ub < lb:
        raise ValueError(f"upper bound {ub} below lower bound {lb}")
    matrix = m.matrix.copy()
    rows = m.num_source_nodes
    cols = m.num_target_nodes
    for pi in improved:
        cost = pi.cached_cost
        if cost is None:
            raise ValueError("improved maps must carry their cached cost")
        gap = cost - lb
        ratio = WEIGHT_CAP if gap < 1e-12 else (ub - lb) / gap
        weight = (1.0 - eta) + eta * ratio
        for i, k in enumerate(pi.forward, start=1):
            if k == DUMMY:
                matrix[i - 1, cols] += weight
            else:
                matrix[i - 1, k - 1] += weight
        for k, i in enumerate(pi.backward, start=1):
            if i == DUMMY:
                matrix[rows, k - 1] += weight
    return ScoresMatrix(matrix)


def _sample_one(
    matrix: np.ndarray, n: int, m: int, rng: random.Random
) -> NodeMap:
    forward = [DUMMY] * n
    covered = [False] * m
    for i in range(n):
        choices = [k for k in range(m) if not covered[k]]
        choices.append(m)  # the deletion column
        weights = [matrix[i, k] for k in choices]
        total = sum(weights)
        if total <= 0.0:
            pick = choices[rng.randrange(len(choices))]
        else:
            shot = rng.random() * total
            acc = 0.0
            pick = choices[-1]
            for k, w in zip(choices, weights):
                acc += w
                if shot < acc:
                    pick = k
                    break
        if pick < m:
            covered[pick] = True
            forward[i] = pick + 1
    return NodeMap.from_forward(forward, m)


def sample_node_maps(m: ScoresMatrix, count: int, seed: int = 0) -> list[NodeMap]:
    """Draw node maps row by row proportionally to the scores.

    Each source row samples among the still-uncovered target columns plus
    the deletion column; a sampled substitution covers its column, and
    whatever stays uncovered at the end becomes an insertion.  All-zero
    restricted rows fall back to a uniform draw.  Sampling retries until
    ``count`` distinct maps exist, up to 100 * count draws, after which
    duplicates fill the remainder.
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    rng = random.Random(seed)
    n = m.num_source_nodes
    cols = m.num_target_nodes
    out: list[NodeMap] = []
    seen: set[tuple] = set()
    attempts = 0
    while len(out) < count and attempts < 100 * count:
        attempts += 1
        pi = _sample_one(m.matrix, n, cols, rng)
        key = tuple(pi.forward)
        if key not in seen:
            seen.add(key)
            out.append(pi)
    while len(out) < count:
        out.append(_sample_one(m.matrix, n, cols, rng))
    return out


def randpost(
    g: LabeledGraph,
    h: LabeledGraph,
    costs: EditCostModel,
    config: MultistartConfig,
    algorithm: LocalSearch,
    *,
    seeded_maps: Sequence[NodeMap] | None = None,
) -> tuple[float, NodeMap, list[LoopStats]]:
    """Multi-start with score-guided restarts; returns (UB, best map, stats).

    Loop 0 is a plain multi-start round over freshly generated initial maps
    (optionally preceded by ``seeded_maps``, which replace the front of the
    generated ones).  Each further loop folds the previous round's results
    into the scores matrix, samples ``kappa`` new initial maps from it, and
    reruns the search.  The upper bound never increases across loops.
    """
    started = time.perf_counter()
    initial = generate_initial_maps(
        g, h, config.kappa, config.init_strategy, config.seed, costs=costs
    )
    if seeded_maps:
        seeds = [pi.copy() for pi in seeded_maps[: config.kappa]]
        initial = seeds + initial[len(seeds) :]
    improved = multistart_run(
        g,
        h,
        initial,
        config.rho,
        algorithm,
        mode=config.mode,
        workers=config.workers,
    )
    best = min(improved, key=lambda pi: pi.cached_cost)
    upper_bound = best.cached_cost
    stats = [LoopStats(0, upper_bound, time.perf_counter() - started)]

    scores = ScoresMatrix.zeros(g.num_nodes, h.num_nodes)
    for loop in range(1, config.num_loops + 1):
        loop_started = time.perf_counter()
        scores = update_scores(
            scores, improved, config.eta, config.lower_bound, upper_bound
        )
        sampled = sample_node_maps(
            scores, config.kappa, derive_seed(config.seed, "sample", loop)
        )
        improved = multistart_run(
            g,
            h,
            sampled,
            config.rho,
            algorithm,
            mode=config.mode,
            workers=config.workers,
        )
        candidate = min(improved, key=lambda pi: pi.cached_cost)
        if candidate.cached_cost < upper_bound:
            best = candidate
            upper_bound = candidate.cached_cost
        stats.append(LoopStats(loop, upper_bound, time.perf_counter() - loop_started))
    return upper_bound, best, stats
