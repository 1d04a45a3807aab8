"""Scenario text format and grid geometry."""

import pytest
from hypothesis import given, strategies as st

import patrolsim as ps
from patrolsim.world import GLYPH_TO_TERRAIN, TERRAIN_TO_GLYPH

from conftest import load, scenario_text

MINI = "coverage = 1.0\nbudget = 30\n\nS..\n...\n...\n"


def test_parse_minimal():
    scenario = ps.parse_scenario(MINI)
    assert scenario.grid.width == 3
    assert scenario.grid.height == 3
    assert scenario.grid.start == ps.Position(0, 0)
    assert scenario.coverage_fraction == 1.0
    assert scenario.movement_budget == 30
    assert isinstance(scenario.framing, ps.Deontological)
    assert scenario.metacognition_enabled is False
    assert scenario.meta_threshold == 4
    assert scenario.observation_radius is None


def test_parse_full_header():
    text = (
        "coverage = 0.8\nbudget = 50\nframing = util\nch = 2.5\n"
        "meta = on\nmeta_threshold = 3\nobs_radius = 2\n\nS..\n...\n...\n"
    )
    scenario = ps.parse_scenario(text)
    assert isinstance(scenario.framing, ps.Utilitarian)
    assert scenario.framing.c_h == 2.5
    assert scenario.metacognition_enabled is True
    assert scenario.meta_threshold == 3
    assert scenario.observation_radius == 2


def test_parse_terrain_glyphs():
    scenario = ps.parse_scenario("coverage = 1.0\nbudget = 9\n\nSCB\nP..\n...\n")
    grid = scenario.grid
    assert grid.terrain(ps.Position(1, 0)) is ps.Terrain.CRATE
    assert grid.terrain(ps.Position(2, 0)) is ps.Terrain.BARREL
    assert grid.terrain(ps.Position(0, 1)) is ps.Terrain.PERSON
    assert grid.terrain(ps.Position(0, 0)) is ps.Terrain.OPEN  # the start cell
    assert grid.person_count == 1


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("coverage 0.5\nbudget = 9\n\nS..\n...\n...\n", 1, "expected 'key = value'"),
        ("coverage = 0.5\nwidth = 3\n\nS..\n...\n...\n", 2, "unknown header key"),
        ("coverage = 0.5\ncoverage = 0.6\nbudget = 9\n\nS..\n...\n...\n", 2, "duplicate"),
        ("coverage =\nbudget = 9\n\nS..\n...\n...\n", 1, "empty value"),
        ("coverage = lots\nbudget = 9\n\nS..\n...\n...\n", 1, "not a number"),
        ("coverage = 0.5\nbudget = 9.5\n\nS..\n...\n...\n", 2, "not an integer"),
        ("coverage = 1.5\nbudget = 9\n\nS..\n...\n...\n", 1, "coverage must be in (0, 1]"),
        ("coverage = 0\nbudget = 9\n\nS..\n...\n...\n", 1, "coverage must be in (0, 1]"),
        ("coverage = 0.5\nbudget = 0\n\nS..\n...\n...\n", 2, "budget must be at least 1"),
        ("coverage = 0.5\nbudget = 9\nframing = kant\n\nS..\n...\n...\n", 3, "'deont' or 'util'"),
        ("coverage = 0.5\nbudget = 9\nch = -1\n\nS..\n...\n...\n", 3, "non-negative"),
        ("coverage = 0.5\nbudget = 9\nmeta = maybe\n\nS..\n...\n...\n", 3, "'on' or 'off'"),
        ("coverage = 0.5\nbudget = 9\nmeta_threshold = -2\n\nS..\n...\n...\n", 3, "non-negative"),
        ("coverage = 0.5\nbudget = 9\nobs_radius = 0\n\nS..\n...\n...\n", 3, "at least 1"),
        ("coverage = 0.5\nbudget = 9\n\nS..\n..\n...\n", 5, "expected 3"),
        ("coverage = 0.5\nbudget = 9\n\nS..\n...\n\n...\n", 6, "blank line inside grid"),
    ],
)
def test_parse_errors_carry_line(text, line, fragment):
    with pytest.raises(ps.ScenarioError) as err:
        ps.parse_scenario(text)
    assert fragment in str(err.value)
    assert err.value.line == line


def test_parse_unknown_glyph_column():
    with pytest.raises(ps.ScenarioError) as err:
        ps.parse_scenario("coverage = 0.5\nbudget = 9\n\nS.x\n...\n...\n")
    assert "unknown grid character 'x'" in str(err.value)
    assert err.value.line == 4
    assert err.value.column == 3
    assert "line 4, column 3" in str(err.value)


def test_parse_duplicate_start_column():
    with pytest.raises(ps.ScenarioError) as err:
        ps.parse_scenario("coverage = 0.5\nbudget = 9\n\nS.S\n...\n...\n")
    assert "more than one start cell" in str(err.value)
    assert err.value.column == 3


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("coverage = 0.5\nbudget = 9\n", "missing grid section"),
        ("coverage = 0.5\nbudget = 9\n\n...\n...\n...\n", "no start cell"),
        ("coverage = 0.5\nbudget = 9\n\nS.\n..\n..\n", "at least 3x3"),
        ("budget = 9\n\nS..\n...\n...\n", "missing required header key 'coverage'"),
        ("coverage = 0.5\n\nS..\n...\n...\n", "missing required header key 'budget'"),
    ],
)
def test_parse_structural_errors(text, fragment):
    with pytest.raises(ps.ScenarioError) as err:
        ps.parse_scenario(text)
    assert fragment in str(err.value)


def test_start_cell_cannot_sit_on_terrain():
    # 'S' is its own glyph, so the only way to get a non-open start is to
    # build the grid by hand.
    cells = ((ps.Terrain.CRATE, ps.Terrain.OPEN, ps.Terrain.OPEN),) + (
        (ps.Terrain.OPEN,) * 3,
    ) * 2
    with pytest.raises(ValueError, match="start cell must be open"):
        ps.GridMap(3, 3, cells, ps.Position(0, 0))


def test_gridmap_validation():
    open_row = (ps.Terrain.OPEN,) * 3
    with pytest.raises(ValueError, match="at least 3x3"):
        ps.GridMap(2, 3, ((ps.Terrain.OPEN,) * 2,) * 3, ps.Position(0, 0))
    with pytest.raises(ValueError, match="declared dimensions"):
        ps.GridMap(3, 3, (open_row,) * 2, ps.Position(0, 0))
    with pytest.raises(ValueError, match="outside the grid"):
        ps.GridMap(3, 3, (open_row,) * 3, ps.Position(3, 0))


def test_neighbors_order_and_clipping():
    grid = ps.parse_scenario(MINI).grid
    assert grid.neighbors(ps.Position(1, 1)) == [
        ps.Position(1, 0),  # north
        ps.Position(2, 1),  # east
        ps.Position(1, 2),  # south
        ps.Position(0, 1),  # west
    ]
    assert grid.neighbors(ps.Position(0, 0)) == [ps.Position(1, 0), ps.Position(0, 1)]
    assert grid.neighbors(ps.Position(2, 2)) == [ps.Position(2, 1), ps.Position(1, 2)]


def test_perimeter_3x3_exact_order():
    grid = ps.parse_scenario(MINI).grid
    assert grid.perimeter_cells == (
        ps.Position(0, 0),
        ps.Position(1, 0),
        ps.Position(2, 0),
        ps.Position(2, 1),
        ps.Position(2, 2),
        ps.Position(1, 2),
        ps.Position(0, 2),
        ps.Position(0, 1),
    )
    assert grid.perimeter_index[ps.Position(0, 1)] == 7


@given(w=st.integers(3, 10), h=st.integers(3, 10))
def test_perimeter_properties(w, h):
    cells = tuple((ps.Terrain.OPEN,) * w for _ in range(h))
    grid = ps.GridMap(w, h, cells, ps.Position(1, 1))
    ring = grid.perimeter_cells
    assert len(ring) == 2 * (w + h) - 4
    assert len(set(ring)) == len(ring)
    assert ring[0] == ps.Position(0, 0)
    for pos in ring:
        assert pos.x in (0, w - 1) or pos.y in (0, h - 1)
    # walking the ring moves one cell at a time and closes the loop
    for a, b in zip(ring, ring[1:] + ring[:1]):
        assert abs(a.x - b.x) + abs(a.y - b.y) == 1


def test_glyph_tables_are_inverse():
    assert {TERRAIN_TO_GLYPH[t]: t for t in TERRAIN_TO_GLYPH} == GLYPH_TO_TERRAIN


@pytest.mark.parametrize("name", ["consensus", "dilemma", "blocked", "hidden_crate", "empty"])
def test_fixture_files_round_trip(name):
    scenario = load(name)
    again = ps.parse_scenario(ps.serialize_scenario(scenario))
    assert again == scenario


def test_consensus_file_is_already_canonical():
    text = scenario_text("consensus")
    assert ps.serialize_scenario(ps.parse_scenario(text)) == text


def test_serialize_normalizes_numbers():
    scenario = ps.parse_scenario("coverage = 1.0\nbudget = 12\n\nS..\n...\n...\n")
    out = ps.serialize_scenario(scenario)
    assert out.startswith("coverage = 1\nbudget = 12\nframing = deont\n\n")


def test_serialize_emits_optional_keys():
    text = (
        "coverage = 0.75\nbudget = 18\nframing = util\nch = 3\n"
        "meta = on\nmeta_threshold = 2.5\nobs_radius = 4\n\nS..\n...\n...\n"
    )
    assert ps.serialize_scenario(ps.parse_scenario(text)) == text


@given(
    w=st.integers(3, 6),
    h=st.integers(3, 6),
    coverage=st.sampled_from([0.25, 0.5, 0.8, 1.0]),
    budget=st.integers(1, 99),
    util=st.booleans(),
    c_h=st.sampled_from([0.0, 1.0, 2.5, 9.0]),
)
def test_serialize_parse_fixed_point(w, h, coverage, budget, util, c_h):
    cells = tuple((ps.Terrain.OPEN,) * w for _ in range(h))
    grid = ps.GridMap(w, h, cells, ps.Position(w - 1, h - 1))
    framing = ps.Utilitarian(c_h=c_h) if util else ps.Deontological()
    scenario = ps.Scenario(grid, coverage, budget, framing)
    assert ps.parse_scenario(ps.serialize_scenario(scenario)) == scenario


def test_rows_as_text_marks_start():
    grid = load("consensus").grid
    rows = grid.rows_as_text()
    assert rows[0][0] == "S"
    assert rows[0][4] == "P"
    assert rows[1][4] == "C"
    assert rows[7][2:6] == "BBBB"
