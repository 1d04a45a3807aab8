"""Scenario execution: deterministic plan playback, the observe-plan-move loop
for partially observable floors, and tabular run summaries."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace as dc_replace
from typing import NamedTuple

from .framing import Deontological
from .metacog import PlanReport, plan_with_metacognition
from .patrol import PatrolState, PlanResult, coverage_target, initial_state
from .world import GridMap, Position, Scenario, Terrain


class Step(NamedTuple):
    src: Position
    dst: Position
    terrain: Terrain
    time_spent: int


class Totals(NamedTuple):
    movements: int
    violations: int
    cells_covered: int
    expansions_total: int
    replans: int


class Outcome(NamedTuple):
    patrol_success: bool
    people_avoided: bool
    conflict: str | None = None


@dataclass(frozen=True)
class Trace:
    steps: tuple[Step, ...]
    totals: Totals
    outcome: Outcome


class ExecutionError(ValueError):
    """A plan does not fit the map it is being replayed on."""


def _step_time(terrain: Terrain) -> int:
    return 2 if terrain is Terrain.BARREL else 1


def _covered_mask(grid: GridMap, positions) -> int:
    mask = 0
    for pos in positions:
        idx = grid.perimeter_index.get(Position(*pos))
        if idx is not None:
            mask |= 1 << idx
    return mask


def execute(
    scenario: Scenario,
    plan: PlanResult,
    *,
    expansions: int | None = None,
    replans: int = 1,
) -> Trace:
    """Replay a plan step by step and recompute every outcome figure from the
    walk itself rather than trusting the planner's numbers."""
    grid = scenario.grid
    steps: list[Step] = []
    violations = 0
    movements = 0
    path = plan.path
    for src, dst in zip(path, path[1:]):
        if abs(src[0] - dst[0]) + abs(src[1] - dst[1]) != 1:
            raise ExecutionError(f"plan jumps from {src} to {dst}")
        if not grid.in_bounds(Position(*dst)):
            raise ExecutionError(f"plan leaves the grid at {dst}")
        terrain = grid.terrain(dst)
        if terrain is Terrain.CRATE:
            raise ExecutionError(f"plan drives through a crate at {dst}")
        dt = _step_time(terrain)
        steps.append(Step(Position(*src), Position(*dst), terrain, dt))
        movements += dt
        if terrain is Terrain.PERSON:
            violations += 1

    covered = _covered_mask(grid, path)
    success = (
        len(path) > 0
        and Position(*path[-1]) == grid.start
        and movements <= scenario.movement_budget
        and covered.bit_count() >= coverage_target(scenario)
    )
    avoided = violations == 0 if steps else True
    totals = Totals(
        movements=movements,
        violations=violations,
        cells_covered=covered.bit_count(),
        expansions_total=plan.expansions if expansions is None else expansions,
        replans=replans,
    )
    return Trace(tuple(steps), totals, Outcome(success, avoided))


def _empty_trace(scenario: Scenario, report: PlanReport) -> Trace:
    covered = _covered_mask(scenario.grid, [scenario.grid.start])
    totals = Totals(
        movements=0,
        violations=0,
        cells_covered=covered.bit_count(),
        expansions_total=report.expansions_total,
        replans=1 + report.replans,
    )
    return Trace((), totals, Outcome(False, True, report.conflict))


def run_scenario(scenario: Scenario) -> tuple[PlanReport, Trace]:
    """Plan (with metacognition if enabled) and execute when feasible.

    An infeasible or absent plan is not walked at all: the agent stays put
    and the trace comes back with zero steps.
    """
    report = plan_with_metacognition(scenario)
    if report.patrol_success:
        assert report.plan is not None
        trace = execute(
            scenario,
            report.plan,
            expansions=report.expansions_total,
            replans=1 + report.replans,
        )
        trace = Trace(trace.steps, trace.totals,
                      Outcome(trace.outcome.patrol_success, trace.outcome.people_avoided,
                              report.conflict))
        return report, trace
    return report, _empty_trace(scenario, report)


def _chebyshev(a: Position, b: Position) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def run_partially_observable(scenario: Scenario, *, replan_cap: int = 100) -> Trace:
    """Observe-plan-move loop for floors the agent cannot see all at once.

    Cells beyond the sensing radius are assumed open until seen. The agent
    plans on its current belief, walks the route, and stops to replan as soon
    as a newly revealed cell contradicts what the rest of the route assumed.
    Because the sensor always covers the next cell before it is entered, a
    revealed crate is never walked into.
    """
    radius = scenario.observation_radius
    if radius is None:
        raise ValueError("scenario has no observation radius")
    true_grid = scenario.grid
    known: dict[Position, Terrain] = {}

    def reveal(center: Position) -> None:
        for y in range(max(0, center[1] - radius), min(true_grid.height, center[1] + radius + 1)):
            for x in range(max(0, center[0] - radius), min(true_grid.width, center[0] + radius + 1)):
                pos = Position(x, y)
                if _chebyshev(pos, center) <= radius:
                    known[pos] = true_grid.terrain(pos)

    def belief_grid() -> GridMap:
        cells = tuple(
            tuple(known.get(Position(x, y), Terrain.OPEN) for x in range(true_grid.width))
            for y in range(true_grid.height)
        )
        return GridMap(true_grid.width, true_grid.height, cells, true_grid.start)

    pos = true_grid.start
    covered = initial_state(true_grid).covered
    violations = 0
    used = 0
    steps: list[Step] = []
    expansions = 0
    rounds = 0
    n_g = coverage_target(scenario)
    reveal(pos)

    outcome: Outcome | None = None
    while outcome is None:
        if rounds >= replan_cap:
            outcome = Outcome(False, violations == 0 if steps else True, "replan_cap")
            break
        belief = belief_grid()
        round_scenario = dc_replace(
            scenario,
            grid=belief,
            movement_budget=scenario.movement_budget - used,
            observation_radius=None,
        )
        snapshot = set(known)
        report = plan_with_metacognition(
            round_scenario, start_state=PatrolState(pos, covered, violations)
        )
        rounds += 1 + report.replans
        expansions += report.expansions_total
        if not report.patrol_success:
            outcome = Outcome(False, violations == 0 if steps else True,
                              report.conflict or "no_plan")
            break
        route = report.plan.path

        contradicted = False
        for step_idx in range(1, len(route)):
            remaining_surprise = any(
                p not in snapshot and known.get(p, Terrain.OPEN) is not Terrain.OPEN
                for p in route[step_idx:]
            )
            if remaining_surprise:
                contradicted = True
                break
            nxt = Position(*route[step_idx])
            terrain = true_grid.terrain(nxt)
            dt = _step_time(terrain)
            if used + dt > scenario.movement_budget:
                outcome = Outcome(False, violations == 0 if steps else True, "over_budget")
                break
            steps.append(Step(pos, nxt, terrain, dt))
            used += dt
            pos = nxt
            idx = true_grid.perimeter_index.get(pos)
            if idx is not None:
                covered |= 1 << idx
            if terrain is Terrain.PERSON:
                violations += 1
            reveal(pos)
        if outcome is not None:
            break
        if contradicted:
            continue
        success = pos == true_grid.start and covered.bit_count() >= n_g
        outcome = Outcome(success, violations == 0 if steps else True,
                          None if success else "no_plan")

    totals = Totals(
        movements=used,
        violations=violations,
        cells_covered=covered.bit_count(),
        expansions_total=expansions,
        replans=rounds,
    )
    return Trace(tuple(steps), totals, outcome)


def summarize(traces: list[Trace], labels: list[str]) -> list[dict]:
    """Flatten traces into rows of the headline run metrics, one per label."""
    if len(traces) != len(labels):
        raise ValueError("traces and labels differ in length")
    rows = []
    for label, trace in zip(labels, traces):
        rows.append(
            {
                "config": label,
                "expansions": trace.totals.expansions_total,
                "people_avoided": trace.outcome.people_avoided,
                "patrol_success": trace.outcome.patrol_success,
            }
        )
    return rows


def trace_to_json(trace: Trace, scenario_text: str | None = None) -> str:
    doc = {
        "steps": [
            {
                "from": list(step.src),
                "to": list(step.dst),
                "terrain": step.terrain.value,
                "time_spent": step.time_spent,
            }
            for step in trace.steps
        ],
        "totals": {
            "movements": trace.totals.movements,
            "violations": trace.totals.violations,
            "cells_covered": trace.totals.cells_covered,
            "expansions_total": trace.totals.expansions_total,
            "replans": trace.totals.replans,
        },
        "outcome": {
            "patrol_success": trace.outcome.patrol_success,
            "people_avoided": trace.outcome.people_avoided,
            "conflict": trace.outcome.conflict,
        },
    }
    if scenario_text is not None:
        doc["scenario"] = scenario_text
    return json.dumps(doc, indent=2) + "\n"


def trace_from_json(text: str) -> tuple[Trace, str | None]:
    """Parse a trace document. Returns the trace and the embedded scenario text, if any."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"trace is not valid JSON: {exc}") from None
    terrain_by_name = {t.value: t for t in Terrain}
    try:
        steps = tuple(
            Step(
                Position(*step["from"]),
                Position(*step["to"]),
                terrain_by_name[step["terrain"]],
                int(step["time_spent"]),
            )
            for step in doc["steps"]
        )
        totals = Totals(
            movements=int(doc["totals"]["movements"]),
            violations=int(doc["totals"]["violations"]),
            cells_covered=int(doc["totals"]["cells_covered"]),
            expansions_total=int(doc["totals"]["expansions_total"]),
            replans=int(doc["totals"]["replans"]),
        )
        outcome = Outcome(
            patrol_success=bool(doc["outcome"]["patrol_success"]),
            people_avoided=bool(doc["outcome"]["people_avoided"]),
            conflict=doc["outcome"].get("conflict"),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"trace document is missing fields: {exc}") from None
    return Trace(steps, totals, outcome), doc.get("scenario")
