"""Reference implementations the real planner is checked against.

Everything here recomputes legality and cost from scratch and searches with
plain uniform-cost expansion (no heuristic), so agreement with the planner is
meaningful. Deliberately slow and simple.
"""

from __future__ import annotations

import heapq
import math

from patrolsim import Deontological, Terrain


def move_params(framing, terrain, entries_so_far):
    """(legal, utility, time) for stepping onto terrain, re-derived from the
    cost model's definition rather than imported from the package."""
    if terrain is Terrain.CRATE:
        return False, 0, 0
    if terrain is Terrain.BARREL:
        return True, 2, 2
    if terrain is Terrain.PERSON:
        if isinstance(framing, Deontological):
            return entries_so_far < framing.k, 1, 1
        return True, 1 + framing.c_h, 1
    return True, 1, 1


def coverage_goal(scenario) -> int:
    return math.ceil(scenario.coverage_fraction * len(scenario.grid.perimeter_cells))


def patrol_min_cost(scenario, framing=None, start_state=None):
    """Least patrol utility by Dijkstra over (position, covered set, entries).

    Returns the utility of the first goal state reached, or None when no
    legal patrol exists. The movement budget is ignored, matching the
    planner's first, budget-blind pass. Entries stay in the state only under
    the deontological framing, where they gate legality; utilitarian entries
    are already priced into g, and tracking them would make the state space
    infinite on maps where the goal is unreachable.
    """
    grid = scenario.grid
    framing = framing if framing is not None else scenario.framing
    count_entries = isinstance(framing, Deontological)
    per_index = {p: i for i, p in enumerate(grid.perimeter_cells)}
    n_g = coverage_goal(scenario)

    if start_state is None:
        pos = grid.start
        mask = 1 << per_index[pos] if pos in per_index else 0
        entries = 0
    else:
        pos, mask, entries = start_state
        if not count_entries:
            entries = 0

    frontier = [(0, 0, pos, mask, entries)]
    seq = 0
    dist = {(pos, mask, entries): 0}
    while frontier:
        g, _, pos, mask, entries = heapq.heappop(frontier)
        if g > dist.get((pos, mask, entries), math.inf):
            continue
        if pos == grid.start and bin(mask).count("1") >= n_g:
            return g
        for npos in grid.neighbors(pos):
            terrain = grid.terrain(npos)
            legal, utility, _time = move_params(framing, terrain, entries)
            if not legal:
                continue
            nmask = mask | (1 << per_index[npos]) if npos in per_index else mask
            nentries = entries
            if count_entries and terrain is Terrain.PERSON:
                nentries = entries + 1
            key = (npos, nmask, nentries)
            ng = g + utility
            if ng < dist.get(key, math.inf):
                dist[key] = ng
                seq += 1
                heapq.heappush(frontier, (ng, seq, npos, nmask, nentries))
    return None


def remaining_cost(scenario, framing, pos, mask, entries):
    """Least utility from an arbitrary mid-patrol state to any goal state,
    or None when the goal is unreachable from there."""
    return patrol_min_cost(scenario, framing, start_state=(pos, mask, entries))


def shortest_route(grid, framing, start, goal):
    """Point-to-point least utility by depth-first enumeration of simple
    paths with a Manhattan-distance bound. Returns the cost or None."""
    best = [None]

    def bound(pos):
        return abs(pos[0] - goal[0]) + abs(pos[1] - goal[1])

    def walk(pos, cost, entries, seen):
        if best[0] is not None and cost + bound(pos) >= best[0]:
            return
        if pos == goal:
            best[0] = cost
            return
        for npos in grid.neighbors(pos):
            if npos in seen:
                continue
            terrain = grid.terrain(npos)
            legal, utility, _time = move_params(framing, terrain, entries)
            if not legal:
                continue
            nentries = entries + 1 if terrain is Terrain.PERSON else entries
            seen.add(npos)
            walk(npos, cost + utility, nentries, seen)
            seen.remove(npos)

    walk(start, 0, 0, {start})
    return best[0]
