"""Best-first search core.

The planner is a plain A* over opaque hashable states. Legality, costs, and
goal detection all come in through callables, so the same loop serves the
patrol task, point-to-point routing, and the budget-aware retry wrapper.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable

# successors() yields (next_state, legal, utility_cost, physical_time);
# illegal entries are skipped inside the loop and may carry next_state=None.
SuccessorFn = Callable[[Hashable], Iterable[tuple[Any, bool, float, int]]]


@dataclass(frozen=True)
class SearchResult:
    path: tuple
    utility_cost: float
    physical_time: int
    expansions: int


@dataclass(frozen=True)
class SearchFailure:
    reason: str  # "exhausted" or "node_limit"
    expansions: int


def reconstruct_path(came_from: dict, end) -> list:
    """Walk predecessor links back from end. Raises on a corrupt (cyclic) chain."""
    path = [end]
    seen = {end}
    cur = end
    while cur in came_from:
        cur = came_from[cur]
        if cur in seen:
            raise ValueError("cycle in predecessor chain")
        seen.add(cur)
        path.append(cur)
    path.reverse()
    return path


def a_star(
    start,
    is_goal: Callable[[Any], bool],
    successors: SuccessorFn,
    heuristic: Callable[[Any], float],
    *,
    node_limit: int | None = None,
    on_expand: Callable[[Any], None] | None = None,
):
    """A* with lazy deletion over the open heap.

    Ties on f break toward the higher g (the deeper node), then FIFO by
    insertion order. The expansion counter increments once per state popped
    in a non-stale entry; with a consistent heuristic every state is
    expanded at most once. Returns SearchResult or SearchFailure.
    """
    g: dict[Any, float] = {start: 0}
    t: dict[Any, int] = {start: 0}
    came_from: dict[Any, Any] = {}
    closed: set = set()
    seq = 0
    open_heap: list[tuple[float, float, int, Any]] = [(heuristic(start), 0.0, 0, start)]
    expansions = 0

    while open_heap:
        _, neg_g, _, state = heapq.heappop(open_heap)
        if -neg_g != g.get(state) or state in closed:
            continue  # stale entry superseded by a cheaper push
        closed.add(state)
        expansions += 1
        if on_expand is not None:
            on_expand(state)
        if is_goal(state):
            path = reconstruct_path(came_from, state)
            return SearchResult(tuple(path), g[state], t[state], expansions)
        if node_limit is not None and expansions >= node_limit:
            return SearchFailure("node_limit", expansions)
        for nstate, legal, cost, time in successors(state):
            if not legal:
                continue
            ng = g[state] + cost
            if nstate in closed:
                continue
            if nstate not in g or ng < g[nstate]:
                g[nstate] = ng
                t[nstate] = t[state] + time
                came_from[nstate] = state
                seq += 1
                heapq.heappush(open_heap, (ng + heuristic(nstate), -ng, seq, nstate))

    return SearchFailure("exhausted", expansions)
