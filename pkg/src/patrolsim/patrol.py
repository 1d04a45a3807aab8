"""The perimeter patrol task.

A patrol starts at the agent's home cell, must occupy enough border cells to
meet the coverage target, and must end back at home. Search states track the
position, a bitmask of border cells visited so far, and how many person-cell
entries the route has spent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

from .framing import Deontological, Framing, Utilitarian, is_legal_move, move_cost
from .search import SearchFailure, SearchResult, a_star
from .world import GridMap, Position, Scenario, Terrain


class PatrolState(NamedTuple):
    pos: Position
    covered: int  # bitmask over clockwise perimeter indices
    violations: int  # person-cell entries, capped for state identity


class PatrolTask(NamedTuple):
    n_g: int
    budget: int
    start: Position


@dataclass(frozen=True)
class PlanResult:
    """A concrete route plus its bookkeeping. path[0] is where planning began."""

    path: tuple[Position, ...]
    utility_cost: float
    physical_time: int
    violations: int
    covered_cells: int
    expansions: int


@dataclass(frozen=True)
class PlanFailure:
    reason: str  # "exhausted" or "node_limit"
    expansions: int


def coverage_target(scenario: Scenario) -> int:
    """Number of perimeter cells the patrol must occupy: ceil(fraction * perimeter)."""
    return math.ceil(scenario.coverage_fraction * len(scenario.grid.perimeter_cells))


def violation_cap(framing: Framing) -> int:
    """Granularity at which person-cell entries stay distinct in state identity.

    Deontological legality reads the count up to k, so k + 1 buckets suffice.
    Utilitarian framing prices entries through g instead, so the count can be
    dropped from identity entirely and recounted from the final path.
    """
    if isinstance(framing, Deontological):
        return framing.k + 1
    return 0


def initial_state(grid: GridMap, framing: Framing | None = None) -> PatrolState:
    covered = 0
    idx = grid.perimeter_index.get(grid.start)
    if idx is not None:
        covered = 1 << idx
    return PatrolState(grid.start, covered, 0)


def apply_move(state: PatrolState, dest: Position, grid: GridMap) -> PatrolState:
    """Advance the patrol state by one legal step onto dest."""
    dx = abs(dest[0] - state.pos[0])
    dy = abs(dest[1] - state.pos[1])
    if dx + dy != 1:
        raise ValueError(f"{dest} is not adjacent to {state.pos}")
    if not grid.in_bounds(dest):
        raise ValueError(f"{dest} outside the grid")
    covered = state.covered
    idx = grid.perimeter_index.get(dest)
    if idx is not None:
        covered |= 1 << idx
    violations = state.violations
    if grid.terrain(dest) is Terrain.PERSON:
        violations += 1
    return PatrolState(Position(*dest), covered, violations)


def is_goal(state: PatrolState, task: PatrolTask) -> bool:
    return state.pos == task.start and state.covered.bit_count() >= task.n_g


def heuristic(state: PatrolState, task: PatrolTask) -> int:
    """Admissible remaining-cost bound: every move costs at least 1 and can
    cover at most one new border cell, and the route must return home."""
    remaining = task.n_g - state.covered.bit_count()
    home = abs(state.pos[0] - task.start[0]) + abs(state.pos[1] - task.start[1])
    return max(remaining, home, 0)


def _successor_fn(grid: GridMap, framing: Framing):
    cap = violation_cap(framing)
    perimeter_index = grid.perimeter_index

    def successors(state: PatrolState):
        out = []
        for npos in grid.neighbors(state.pos):
            terrain = grid.terrain(npos)
            if not is_legal_move(framing, state, terrain):
                out.append((None, False, 0, 0))
                continue
            cost, time = move_cost(framing, terrain)
            covered = state.covered
            idx = perimeter_index.get(npos)
            if idx is not None:
                covered |= 1 << idx
            violations = state.violations
            if terrain is Terrain.PERSON:
                violations = min(violations + 1, cap)
            out.append((PatrolState(npos, covered, violations), True, cost, time))
        return out

    return successors


def _route_violations(grid: GridMap, path: tuple[Position, ...]) -> int:
    return sum(1 for pos in path[1:] if grid.terrain(pos) is Terrain.PERSON)


def _to_plan(result: SearchResult, grid: GridMap, extra_expansions: int = 0) -> PlanResult:
    states = result.path
    positions = tuple(s.pos for s in states)
    return PlanResult(
        path=positions,
        utility_cost=result.utility_cost,
        physical_time=result.physical_time,
        violations=_route_violations(grid, positions),
        covered_cells=states[-1].covered.bit_count(),
        expansions=result.expansions + extra_expansions,
    )


def plan_patrol(
    scenario: Scenario,
    framing: Framing | None = None,
    *,
    start_state: PatrolState | None = None,
    budget: int | None = None,
    node_limit: int | None = None,
) -> PlanResult | PlanFailure:
    """Plan a minimum-utility patrol for the scenario under the given framing.

    The first search ignores the movement budget and returns the overall
    optimum. If that optimum overruns the budget, a second search looks for
    the cheapest route that fits by folding elapsed time into the task state,
    so a pricier-but-faster route can still be found. When nothing fits, the
    over-budget optimum is returned and the caller decides what to do with it.

    start_state lets a replanning loop continue a patrol already underway;
    its violations field should hold the true count so prohibition budgets
    keep their meaning mid-route.
    """
    grid = scenario.grid
    if framing is None:
        framing = scenario.framing
    if budget is None:
        budget = scenario.movement_budget
    task = PatrolTask(coverage_target(scenario), budget, grid.start)

    if start_state is None:
        s0 = initial_state(grid, framing)
    else:
        cap = violation_cap(framing)
        s0 = PatrolState(Position(*start_state.pos), start_state.covered,
                         min(start_state.violations, cap))

    successors = _successor_fn(grid, framing)
    result = a_star(
        s0,
        lambda s: is_goal(s, task),
        successors,
        lambda s: heuristic(s, task),
        node_limit=node_limit,
    )
    if isinstance(result, SearchFailure):
        return PlanFailure(result.reason, result.expansions)

    plan = _to_plan(result, grid)
    if plan.physical_time <= budget:
        return plan

    # Budget retry. Under a deontological framing every move's utility equals
    # its duration, so the optimum above is already the fastest patrol there
    # is and nothing quicker can exist; the same holds for a zero surcharge.
    # Otherwise a route with more person entries can be faster, so probe each
    # person-entry allowance with a time-minimizing search and keep the
    # cheapest probe that fits the budget.
    if isinstance(framing, Deontological) or framing.c_h == 0:
        return plan
    true_v0 = start_state.violations if start_state is not None else 0
    retry, probe_expansions = _cheapest_within_budget(
        grid, task, framing, (s0.pos, s0.covered, true_v0), budget, node_limit
    )
    if retry is not None:
        return replace(retry, expansions=plan.expansions + probe_expansions)
    return replace(plan, expansions=plan.expansions + probe_expansions)


def _fastest_at_allowance(
    grid: GridMap,
    task: PatrolTask,
    framing: Utilitarian,
    origin: tuple[Position, int, int],
    allowance: int | None,
    node_limit: int | None,
) -> SearchResult | SearchFailure:
    """Minimum-physical-time patrol entering person cells at most `allowance`
    times in total (None = unrestricted). A deontological probe framing does
    the work: its utility equals elapsed time move-for-move, so the generic
    search stays single-criterion and simply minimizes duration."""
    pos, covered, v0 = origin
    probe: Framing
    if allowance is None:
        probe = Utilitarian(c_h=0, open_cost=framing.open_cost,
                            barrel_cost=framing.barrel_cost)
    else:
        probe = Deontological(k=allowance, open_cost=framing.open_cost,
                              barrel_cost=framing.barrel_cost)
    s0 = PatrolState(pos, covered, min(v0, violation_cap(probe)))
    return a_star(
        s0,
        lambda s: is_goal(s, task),
        _successor_fn(grid, probe),
        lambda s: heuristic(s, task),
        node_limit=node_limit,
    )


def _cheapest_within_budget(
    grid: GridMap,
    task: PatrolTask,
    framing: Utilitarian,
    origin: tuple[Position, int, int],
    budget: int,
    node_limit: int | None,
) -> tuple[PlanResult | None, int]:
    """Cheapest budget-feasible patrol under a utilitarian framing.

    Utility decomposes as physical time plus c_h per person entry, so the
    fastest route at each entry allowance v is the best candidate with v or
    fewer entries, and the cheapest feasible candidate over all v is the
    true constrained optimum. Allowances above the unrestricted-fastest
    route's entry count cannot produce faster routes, which bounds the loop.
    """
    expansions = 0
    unrestricted = _fastest_at_allowance(grid, task, framing, origin, None, node_limit)
    expansions += unrestricted.expansions
    if isinstance(unrestricted, SearchFailure):
        return None, expansions
    floor_time = unrestricted.physical_time
    if floor_time > budget:
        return None, expansions

    best: PlanResult | None = None
    v = origin[2]
    while True:
        probe = _fastest_at_allowance(grid, task, framing, origin, v, node_limit)
        expansions += probe.expansions
        if isinstance(probe, SearchFailure):
            if probe.reason == "node_limit":
                break
        else:
            positions = tuple(s.pos for s in probe.path)
            violations = _route_violations(grid, positions)
            if probe.physical_time <= budget:
                utility = probe.physical_time + framing.c_h * violations
                if best is None or utility < best.utility_cost:
                    best = PlanResult(
                        path=positions,
                        utility_cost=utility,
                        physical_time=probe.physical_time,
                        violations=violations,
                        covered_cells=probe.path[-1].covered.bit_count(),
                        expansions=0,
                    )
            if probe.physical_time <= floor_time:
                break
        v += 1
    return best, expansions
