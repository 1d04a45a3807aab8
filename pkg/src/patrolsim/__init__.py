"""Norm-aware patrol planning and scenario simulation on grid warehouses."""

from .framing import Deontological, Framing, Utilitarian, is_legal_move, move_cost
from .metacog import (
    PlanReport,
    plan_with_metacognition,
    resolve_deontological_conflict,
    review_utilitarian_plan,
)
from .patrol import (
    PatrolState,
    PlanFailure,
    PlanResult,
    coverage_target,
    plan_patrol,
)
from .render import RenderError, render_ascii, render_svg
from .search import SearchFailure, SearchResult, a_star
from .sim import (
    ExecutionError,
    Outcome,
    Step,
    Totals,
    Trace,
    execute,
    run_partially_observable,
    run_scenario,
    summarize,
    trace_from_json,
    trace_to_json,
)
from .world import (
    GridMap,
    Position,
    Scenario,
    ScenarioError,
    Terrain,
    parse_scenario,
    serialize_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "Deontological",
    "ExecutionError",
    "Framing",
    "GridMap",
    "Outcome",
    "PatrolState",
    "PlanFailure",
    "PlanReport",
    "PlanResult",
    "Position",
    "RenderError",
    "Scenario",
    "ScenarioError",
    "SearchFailure",
    "SearchResult",
    "Step",
    "Terrain",
    "Totals",
    "Trace",
    "a_star",
    "coverage_target",
    "execute",
    "is_legal_move",
    "move_cost",
    "parse_scenario",
    "plan_patrol",
    "plan_with_metacognition",
    "render_ascii",
    "render_svg",
    "resolve_deontological_conflict",
    "review_utilitarian_plan",
    "run_partially_observable",
    "run_scenario",
    "serialize_scenario",
    "summarize",
    "trace_from_json",
    "trace_to_json",
]
