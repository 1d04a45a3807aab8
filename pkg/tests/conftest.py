"""Shared fixtures: parsed scenario files, a memoizing planner front end, and
the acceptance-criteria summary printed at the end of a run."""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

import pytest

import patrolsim as ps

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"

ACCEPTANCE: dict[int, list] = {}


def scenario_text(name: str) -> str:
    return (SCENARIO_DIR / f"{name}.txt").read_text()


def load(name: str) -> ps.Scenario:
    return ps.parse_scenario(scenario_text(name))


@pytest.fixture(scope="session")
def consensus():
    return load("consensus")


@pytest.fixture(scope="session")
def dilemma():
    return load("dilemma")


@pytest.fixture(scope="session")
def blocked():
    return load("blocked")


@pytest.fixture(scope="session")
def hidden_crate():
    return load("hidden_crate")


@pytest.fixture(scope="session")
def empty():
    return load("empty")


_plan_cache: dict = {}


@pytest.fixture(scope="session")
def planner():
    """plan(scenario, framing=None, **field_overrides) with session-wide
    memoization, so the heavyweight fixture plans are computed once."""

    def plan(scenario, framing=None, **overrides):
        if framing is not None:
            overrides["framing"] = framing
        if overrides:
            scenario = replace(scenario, **overrides)
        if scenario not in _plan_cache:
            _plan_cache[scenario] = ps.plan_with_metacognition(scenario)
        return _plan_cache[scenario]

    return plan


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(ACCEPTANCE):
        status, description = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d} {status}: {description}")
