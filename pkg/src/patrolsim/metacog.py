"""Metacognitive review around the planner.

Two recovery strategies, mirroring how the two framings can go wrong in
opposite directions. A deontological agent that cannot field a feasible
route relaxes its prohibition one entry at a time. A utilitarian agent whose
route disturbs someone for a suspiciously low price re-evaluates the route
with the surcharge raised past its review threshold, and keeps the cleaner
route when that still completes the patrol.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .framing import Deontological, Framing, Utilitarian
from .patrol import PatrolState, PlanFailure, PlanResult, coverage_target, plan_patrol
from .world import Scenario


@dataclass(frozen=True)
class PlanReport:
    """Outcome of planning plus any metacognitive activity around it.

    conflict names the condition that triggered (or ended) the metacognitive
    round: "over_budget", "no_plan", "cheap_violation", or None when the
    first plan was already acceptable. replans counts planning rounds beyond
    the first; expansions_total sums node expansions across all of them.
    """

    plan: PlanResult | None
    framing_used: Framing
    replans: int
    patrol_success: bool
    people_avoided: bool
    conflict: str | None
    expansions_total: int


def _feasible(scenario: Scenario, plan: PlanResult | PlanFailure) -> bool:
    if not isinstance(plan, PlanResult):
        return False
    return (
        plan.physical_time <= scenario.movement_budget
        and plan.covered_cells >= coverage_target(scenario)
    )


def _report(
    scenario: Scenario,
    plan: PlanResult | PlanFailure,
    framing: Framing,
    replans: int,
    expansions: int,
    conflict: str | None,
) -> PlanReport:
    success = _feasible(scenario, plan)
    result = plan if isinstance(plan, PlanResult) else None
    # A patrol that never becomes feasible is never executed, and an agent
    # that does not move trivially stays out of everyone's way.
    avoided = True if not success else result.violations == 0
    return PlanReport(
        plan=result,
        framing_used=framing,
        replans=replans,
        patrol_success=success,
        people_avoided=avoided,
        conflict=conflict,
        expansions_total=expansions,
    )


def _failure_kind(plan: PlanResult | PlanFailure) -> str:
    return "over_budget" if isinstance(plan, PlanResult) else "no_plan"


def resolve_deontological_conflict(
    scenario: Scenario, start_state: PatrolState | None = None
) -> PlanReport:
    """Raise the prohibition allowance k until a budget-feasible patrol exists.

    Starts from the scenario framing's own k. Gives up once k exceeds the
    number of people on the map, at which point further relaxation cannot
    unlock any new cell.
    """
    base = scenario.framing
    assert isinstance(base, Deontological)
    limit = scenario.grid.person_count
    expansions = 0
    replans = 0
    conflict: str | None = None
    k = base.k
    while True:
        framing = replace(base, k=k)
        plan = plan_patrol(scenario, framing, start_state=start_state)
        expansions += plan.expansions
        if _feasible(scenario, plan):
            return _report(scenario, plan, framing, replans, expansions, conflict)
        if conflict is None:
            conflict = _failure_kind(plan)
        k += 1
        if k > limit:
            return _report(scenario, plan, framing, replans, expansions, conflict)
        replans += 1


def review_utilitarian_plan(
    scenario: Scenario, report: PlanReport, start_state: PatrolState | None = None
) -> PlanReport:
    """Reconsider a route that buys person-cell entries cheaply.

    Fires when the plan has violations, c_h sits at or below the review
    threshold, and there is movement budget to spare. The route is re-costed
    with c_h raised to threshold + 1; the revised plan is adopted only when
    it still meets coverage within budget.
    """
    plan = report.plan
    assert plan is not None
    framing = report.framing_used
    assert isinstance(framing, Utilitarian)
    if (
        plan.violations == 0
        or framing.c_h > scenario.meta_threshold
        or plan.physical_time >= scenario.movement_budget
    ):
        return report

    revised_framing = replace(framing, c_h=scenario.meta_threshold + 1)
    revised = plan_patrol(scenario, revised_framing, start_state=start_state)
    expansions = report.expansions_total + revised.expansions
    if _feasible(scenario, revised):
        return _report(
            scenario, revised, revised_framing, report.replans + 1, expansions, "cheap_violation"
        )
    return replace(
        report,
        replans=report.replans + 1,
        expansions_total=expansions,
        conflict="cheap_violation",
    )


def plan_with_metacognition(
    scenario: Scenario, start_state: PatrolState | None = None
) -> PlanReport:
    """Plan under the scenario's framing, applying its metacognitive recovery
    when enabled. With metacognition off this is exactly the bare planner
    plus the feasibility bookkeeping."""
    framing = scenario.framing
    if isinstance(framing, Deontological):
        if scenario.metacognition_enabled:
            return resolve_deontological_conflict(scenario, start_state)
        plan = plan_patrol(scenario, framing, start_state=start_state)
        conflict = None if _feasible(scenario, plan) else _failure_kind(plan)
        return _report(scenario, plan, framing, 0, plan.expansions, conflict)

    plan = plan_patrol(scenario, framing, start_state=start_state)
    conflict = None if _feasible(scenario, plan) else _failure_kind(plan)
    report = _report(scenario, plan, framing, 0, plan.expansions, conflict)
    if scenario.metacognition_enabled and report.plan is not None:
        report = review_utilitarian_plan(scenario, report, start_state)
    return report
