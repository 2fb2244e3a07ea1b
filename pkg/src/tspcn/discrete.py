"""Phase 1: tour search over the discretization nodes, one node per circle.

Three solvers share the node graph: an exact dynamic program over
(visited-subset, last-node) states, an exact cutting-plane branch-and-bound
on a circle-successor assignment relaxation, and a nearest-neighbor + 2-opt
heuristic. All of them return a canonicalized ``DiscreteTour``: the order
starts at circle 0 and, for N >= 3, runs in the direction that makes
``order[1] < order[-1]`` (tour reversal never changes the length, so this
pins one of the two mirror images deterministically).
"""

from __future__ import annotations

import heapq
import itertools
import random
import time
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import kernels
from .geometry import make_node, DiscreteNode
from .model import DiscreteTour, Instance, SizeLimitError

# Dense node graphs beyond this many nodes are refused outright.
MAX_GRAPH_NODES = 4096
# Subset DP memory grows as 2^N; above this the exact solver is never safe.
HARD_EXACT_CAP = 18
# Number of nearest-neighbor construction starts tried by the heuristic.
HEURISTIC_STARTS = 8


@dataclass(frozen=True)
class NodeGraph:
    """All n*k discretization nodes plus their dense distance matrix.

    ``dist[p, q]`` is the node distance for nodes p = circle*k + slot;
    intra-circle entries (including the diagonal) are +inf and never usable.
    """

    n: int
    k: int
    nodes: tuple[DiscreteNode, ...]
    dist: np.ndarray


def build_node_graph(instance: Instance, k: int) -> NodeGraph:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    n = instance.n
    if n * k > MAX_GRAPH_NODES:
        raise SizeLimitError(
            f"node graph would hold {n * k} nodes; the limit is {MAX_GRAPH_NODES}"
        )
    nodes = tuple(
        make_node(i, c, s, k) for i, c in enumerate(instance.circles) for s in range(k)
    )
    pts = np.array([nd.point for nd in nodes], dtype=np.float64)
    dx = pts[:, 0][:, None] - pts[:, 0][None, :]
    dy = pts[:, 1][:, None] - pts[:, 1][None, :]
    dist = np.sqrt(dx * dx + dy * dy)
    for c in range(n):
        dist[c * k : (c + 1) * k, c * k : (c + 1) * k] = np.inf
    return NodeGraph(n, k, nodes, dist)


def tour_length_nodes(
    graph: NodeGraph, order: Sequence[int], slots: Sequence[int]
) -> float:
    """Closed-tour length through the slot nodes, summed in tour order."""
    k = graph.k
    total = 0.0
    n = len(order)
    for t in range(n):
        a = order[t]
        b = order[(t + 1) % n]
        total += float(graph.dist[a * k + slots[a], b * k + slots[b]])
    return total


def _canonical_order(order: list[int]) -> list[int]:
    # Pin the direction of travel; slots are indexed by circle so they are
    # unaffected by a reversal.
    if len(order) >= 3 and order[1] > order[-1]:
        return [0] + order[:0:-1]
    return order


def _finish_tour(
    graph: NodeGraph,
    order: list[int],
    slots: list[int],
    proven: bool = True,
    relaxation_bound: float | None = None,
    cuts: int | None = None,
) -> DiscreteTour:
    order = _canonical_order(order)
    return DiscreteTour(
        order=tuple(order),
        slots=tuple(slots),
        k=graph.k,
        length=tour_length_nodes(graph, order, slots),
        proven_optimal=proven,
        relaxation_bound=relaxation_bound,
        cuts=cuts,
    )


def solve_exact_dp(instance: Instance, k: int = 4, exact_limit: int = 16) -> DiscreteTour:
    """Globally optimal discrete tour by subset dynamic programming.

    States are (subset of circles containing circle 0, terminal node), seeded
    from each slot of circle 0 and closed back to the seed. Deterministic:
    all candidate scans run in ascending index order with strict-<
    improvement, and the result is direction-canonicalized.
    """
    n = instance.n
    limit = min(exact_limit, HARD_EXACT_CAP)
    if n > limit:
        raise SizeLimitError(
            f"exact-dp handles at most {limit} circles, got {n}; "
            f"use the cutting-plane or heuristic solver instead"
        )
    graph = build_node_graph(instance, k)
    order, slots = kernels.held_karp_gtsp(graph.dist, n, k)
    return _finish_tour(graph, order, slots)


def reoptimize_slots(
    instance: Instance, order: Sequence[int], k: int = 4
) -> tuple[tuple[int, ...], float]:
    """Globally optimal slot per circle for a fixed cyclic circle order."""
    graph = build_node_graph(instance, k)
    return _reoptimize_on_graph(graph, list(order))


def _reoptimize_on_graph(graph: NodeGraph, order: list[int]) -> tuple[tuple[int, ...], float]:
    slots = kernels.chain_best_slots(graph.dist, graph.n, graph.k, order)
    return tuple(slots), tour_length_nodes(graph, order, slots)


def min_slot_arc_costs(graph: NodeGraph) -> np.ndarray:
    """Per circle pair, the smallest node distance over all slot pairs.

    These are admissible lower bounds on the cost of traveling between two
    circles whatever slots phase 1 ends up choosing.
    """
    n, k = graph.n, graph.k
    return graph.dist.reshape(n, k, n, k).min(axis=(1, 3))


def find_subtours(successor: Mapping[int, int] | Sequence[int]) -> list[list[int]]:
    """Partition circles into the directed cycles of a successor permutation.

    Each cycle is reported starting at its smallest member; cycles are sorted
    by that member. Raises ValueError if the input is not a permutation.
    """
    if isinstance(successor, Mapping):
        n = len(successor)
        if sorted(successor.keys()) != list(range(n)):
            raise ValueError("successor map must have every circle as a key")
        succ = [successor[i] for i in range(n)]
    else:
        succ = list(successor)
        n = len(succ)
    if sorted(succ) != list(range(n)):
        raise ValueError("successor map is not a permutation of the circles")
    seen = [False] * n
    cycles: list[list[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        cycle = []
        node = start
        while not seen[node]:
            seen[node] = True
            cycle.append(node)
            node = succ[node]
        cycles.append(cycle)
    return cycles


def solve_heuristic(instance: Instance, k: int = 4, seed: int = 0) -> DiscreteTour:
    """Nearest-neighbor construction plus 2-opt, then exact slot assignment.

    Arc costs for construction and 2-opt are the min-slot-pair circle
    distances; the final slot assignment restores the true discrete tour
    length for the chosen order. Deterministic for a fixed seed.
    """
    n = instance.n
    graph = build_node_graph(instance, k)
    costs = min_slot_arc_costs(graph)

    if n <= HEURISTIC_STARTS:
        starts = list(range(n))
    else:
        rng = random.Random(seed)
        starts = [0] + sorted(rng.sample(range(1, n), HEURISTIC_STARTS - 1))

    best: DiscreteTour | None = None
    for start in starts:
        order = _nearest_neighbor(costs, n, start)
        order = kernels.two_opt(costs, order)
        zero = order.index(0)
        order = order[zero:] + order[:zero]
        slots, _length = _reoptimize_on_graph(graph, order)
        tour = _finish_tour(graph, order, list(slots), proven=False)
        if best is None or tour.length < best.length:
            best = tour
    assert best is not None
    return best


def _nearest_neighbor(costs: np.ndarray, n: int, start: int) -> list[int]:
    visited = np.zeros(n, dtype=bool)
    visited[start] = True
    order = [start]
    cur = start
    for _ in range(n - 1):
        row = np.where(visited, np.inf, costs[cur])
        cur = int(np.argmin(row))
        visited[cur] = True
        order.append(cur)
    return order


def _assignment(
    base: np.ndarray,
    forbidden: Sequence[tuple[int, int]],
    required: Sequence[tuple[int, int]],
) -> tuple[float, tuple[int, ...]] | None:
    """Min-cost successor assignment under arc constraints, or None if empty."""
    cost = base.copy()
    for i, j in forbidden:
        cost[i, j] = np.inf
    for i, j in required:
        keep = cost[i, j]
        if not np.isfinite(keep):
            return None
        cost[i, :] = np.inf
        cost[:, j] = np.inf
        cost[i, j] = keep
    try:
        rows, cols = linear_sum_assignment(cost)
    except ValueError:
        return None
    value = float(cost[rows, cols].sum())
    if not np.isfinite(value):
        return None
    succ = [0] * base.shape[0]
    for i, j in zip(rows, cols):
        succ[int(i)] = int(j)
    return value, tuple(succ)


def solve_cutting_plane(
    instance: Instance,
    k: int = 4,
    time_limit: float | None = None,
    node_limit: int | None = None,
) -> DiscreteTour:
    """Exact discrete tour via lazy subtour elimination over an assignment relaxation.

    The relaxation drops subtour constraints entirely: a min-cost
    circle-successor assignment with in-degree and out-degree one, arc costs
    the min-slot-pair distances. Whenever a relaxed optimum contains proper
    subtours, the violated subtour-elimination cut for the smallest one is
    enforced combinatorially by branching over its arcs (child i forbids
    arc i and pins arcs 0..i-1, which partitions the solutions missing at
    least one cut arc). Anti-parallel 2-cycles are subtours of size two, so
    for N >= 3 they are cut the same way. Hamiltonian relaxed solutions
    become incumbents after exact slot re-assignment and are then excluded by
    the same branching, since the min-slot arc costs only bound their true
    length from below. Best-first search makes the first bound >= incumbent
    a proof of optimality.

    On hitting ``time_limit`` (wall seconds) or ``node_limit`` (explored
    relaxations, for deterministic budgets) the best incumbent is returned
    flagged non-proven, with the smallest open relaxation bound attached.
    """
    n = instance.n
    graph = build_node_graph(instance, k)
    base = min_slot_arc_costs(graph)

    # Seed the incumbent so bound pruning bites from the start.
    seed_tour = solve_heuristic(instance, k=k, seed=0)
    best_len = seed_tour.length
    best_order = list(seed_tour.order)
    best_slots = list(seed_tour.slots)

    started = time.perf_counter()
    counter = itertools.count()
    cuts = 0
    explored = 0
    proven = True
    open_bound = best_len

    root = _assignment(base, (), ())
    heap: list[tuple[float, int, tuple, tuple, tuple[int, ...]]] = []
    if root is not None:
        heapq.heappush(heap, (root[0], next(counter), (), (), root[1]))

    while heap:
        bound, _, forbidden, required, succ = heapq.heappop(heap)
        if bound >= best_len:
            break  # best-first: every open node is bound-dominated
        if (time_limit is not None and time.perf_counter() - started > time_limit) or (
            node_limit is not None and explored >= node_limit
        ):
            proven = False
            open_bound = bound
            break
        explored += 1

        cycles = find_subtours(succ)
        if len(cycles) == 1:
            order = list(cycles[0])
            slots, true_len = _reoptimize_on_graph(graph, order)
            if true_len < best_len:
                best_len = true_len
                best_order = order
                best_slots = list(slots)
            arcs = [(order[t], order[(t + 1) % n]) for t in range(n)]
        else:
            smallest = min(cycles, key=len)
            arcs = [
                (smallest[t], smallest[(t + 1) % len(smallest)])
                for t in range(len(smallest))
            ]
            cuts += 1

        for idx, arc in enumerate(arcs):
            if arc in required:
                continue
            child_forbidden = tuple(sorted(set(forbidden) | {arc}))
            child_required = tuple(sorted(set(required) | set(arcs[:idx])))
            child = _assignment(base, child_forbidden, child_required)
            if child is None:
                continue
            value, child_succ = child
            if value >= best_len:
                continue
            heapq.heappush(
                heap, (value, next(counter), child_forbidden, child_required, child_succ)
            )

    return _finish_tour(
        graph,
        best_order,
        best_slots,
        proven=proven,
        relaxation_bound=best_len if proven else open_bound,
        cuts=cuts,
    )
