"""Grid-warehouse world model: terrain, map geometry, and the scenario text format."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import TYPE_CHECKING, NamedTuple

if TYPE_CHECKING:
    from .framing import Framing


class Terrain(Enum):
    """Cell contents. Crates block movement entirely, barrels slow it down,
    and cells occupied by a person are the subject of the movement norm."""

    OPEN = "open"
    CRATE = "crate"
    BARREL = "barrel"
    PERSON = "person"


GLYPH_TO_TERRAIN = {
    ".": Terrain.OPEN,
    "C": Terrain.CRATE,
    "B": Terrain.BARREL,
    "P": Terrain.PERSON,
}
TERRAIN_TO_GLYPH = {t: g for g, t in GLYPH_TO_TERRAIN.items()}

HEADER_KEYS = (
    "coverage",
    "budget",
    "framing",
    "ch",
    "meta",
    "meta_threshold",
    "obs_radius",
)


class Position(NamedTuple):
    x: int
    y: int


class ScenarioError(ValueError):
    """Malformed scenario text. Carries the offending line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class GridMap:
    """Rectangular warehouse floor. cells[y][x] holds the terrain at (x, y);
    row 0 is the top of the map and y grows downward."""

    width: int
    height: int
    cells: tuple[tuple[Terrain, ...], ...]
    start: Position

    def __post_init__(self):
        if self.width < 3 or self.height < 3:
            raise ValueError(f"grid must be at least 3x3, got {self.width}x{self.height}")
        if len(self.cells) != self.height or any(len(row) != self.width for row in self.cells):
            raise ValueError("cells do not match the declared dimensions")
        if not self.in_bounds(self.start):
            raise ValueError(f"start {self.start} outside the grid")
        if self.terrain(self.start) is not Terrain.OPEN:
            raise ValueError("start cell must be open")

    def in_bounds(self, pos: Position) -> bool:
        return 0 <= pos[0] < self.width and 0 <= pos[1] < self.height

    def terrain(self, pos: Position) -> Terrain:
        return self.cells[pos[1]][pos[0]]

    def neighbors(self, pos: Position) -> list[Position]:
        """4-connected neighbors in N, E, S, W order, clipped to the grid."""
        x, y = pos
        out = []
        for nx, ny in ((x, y - 1), (x + 1, y), (x, y + 1), (x - 1, y)):
            if 0 <= nx < self.width and 0 <= ny < self.height:
                out.append(Position(nx, ny))
        return out

    @cached_property
    def perimeter_cells(self) -> tuple[Position, ...]:
        """Border cells ordered clockwise starting from (0, 0), each exactly once."""
        w, h = self.width, self.height
        cells = [Position(x, 0) for x in range(w)]
        cells += [Position(w - 1, y) for y in range(1, h)]
        cells += [Position(x, h - 1) for x in range(w - 2, -1, -1)]
        cells += [Position(0, y) for y in range(h - 2, 0, -1)]
        return tuple(cells)

    @cached_property
    def perimeter_index(self) -> dict[Position, int]:
        return {pos: i for i, pos in enumerate(self.perimeter_cells)}

    @cached_property
    def person_count(self) -> int:
        return sum(row.count(Terrain.PERSON) for row in self.cells)

    def rows_as_text(self) -> list[str]:
        lines = []
        for y in range(self.height):
            chars = []
            for x in range(self.width):
                if (x, y) == self.start:
                    chars.append("S")
                else:
                    chars.append(TERRAIN_TO_GLYPH[self.cells[y][x]])
            lines.append("".join(chars))
        return lines


@dataclass(frozen=True)
class Scenario:
    """A patrol problem: the floor plan plus the task and framing parameters."""

    grid: GridMap
    coverage_fraction: float
    movement_budget: int
    framing: "Framing"
    metacognition_enabled: bool = False
    meta_threshold: float = 4
    observation_radius: int | None = None


def _parse_number(value: str, key: str, lineno: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise ScenarioError(f"value for {key!r} is not a number: {value!r}", line=lineno) from None


def _parse_int(value: str, key: str, lineno: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ScenarioError(f"value for {key!r} is not an integer: {value!r}", line=lineno) from None


def parse_scenario(text: str) -> Scenario:
    """Parse the scenario format: 'key = value' headers, a blank line, then grid rows.

    Grid glyphs: '.' open, 'C' crate, 'B' barrel, 'P' person, 'S' start (open).
    Unknown keys and glyphs are rejected with the line (and column) that broke.
    """
    from .framing import Deontological, Utilitarian

    lines = text.splitlines()
    n = len(lines)
    idx = 0
    header: dict[str, tuple[str, int]] = {}

    while idx < n and lines[idx].strip() != "":
        raw = lines[idx]
        lineno = idx + 1
        if "=" not in raw:
            raise ScenarioError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, _, value = raw.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in HEADER_KEYS:
            raise ScenarioError(f"unknown header key {key!r}", line=lineno)
        if key in header:
            raise ScenarioError(f"duplicate header key {key!r}", line=lineno)
        if value == "":
            raise ScenarioError(f"empty value for {key!r}", line=lineno)
        header[key] = (value, lineno)
        idx += 1

    while idx < n and lines[idx].strip() == "":
        idx += 1

    rows: list[tuple[Terrain, ...]] = []
    width: int | None = None
    start: Position | None = None
    while idx < n:
        raw = lines[idx]
        lineno = idx + 1
        if raw.strip() == "":
            if any(l.strip() for l in lines[idx:]):
                raise ScenarioError("blank line inside grid", line=lineno)
            break
        row: list[Terrain] = []
        for col, ch in enumerate(raw, start=1):
            if ch == "S":
                if start is not None:
                    raise ScenarioError("more than one start cell 'S'", line=lineno, column=col)
                start = Position(col - 1, len(rows))
                row.append(Terrain.OPEN)
            elif ch in GLYPH_TO_TERRAIN:
                row.append(GLYPH_TO_TERRAIN[ch])
            else:
                raise ScenarioError(f"unknown grid character {ch!r}", line=lineno, column=col)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ScenarioError(f"row has {len(row)} cells, expected {width}", line=lineno)
        rows.append(tuple(row))
        idx += 1

    if not rows:
        raise ScenarioError("missing grid section")
    if start is None:
        raise ScenarioError("grid has no start cell 'S'")
    assert width is not None
    if width < 3 or len(rows) < 3:
        raise ScenarioError(f"grid must be at least 3x3, got {width}x{len(rows)}")

    for key in ("coverage", "budget"):
        if key not in header:
            raise ScenarioError(f"missing required header key {key!r}")

    coverage, cov_line = header["coverage"]
    coverage_fraction = _parse_number(coverage, "coverage", cov_line)
    if not 0 < coverage_fraction <= 1:
        raise ScenarioError("coverage must be in (0, 1]", line=cov_line)

    budget_raw, budget_line = header["budget"]
    movement_budget = _parse_int(budget_raw, "budget", budget_line)
    if movement_budget < 1:
        raise ScenarioError("budget must be at least 1", line=budget_line)

    framing_name = "deont"
    if "framing" in header:
        framing_name, framing_line = header["framing"]
        if framing_name not in ("deont", "util"):
            raise ScenarioError(
                f"framing must be 'deont' or 'util', got {framing_name!r}", line=framing_line
            )

    c_h = 1.0
    if "ch" in header:
        ch_raw, ch_line = header["ch"]
        c_h = _parse_number(ch_raw, "ch", ch_line)
        if c_h < 0:
            raise ScenarioError("ch must be non-negative", line=ch_line)

    meta_enabled = False
    if "meta" in header:
        meta_raw, meta_line = header["meta"]
        if meta_raw not in ("on", "off"):
            raise ScenarioError(f"meta must be 'on' or 'off', got {meta_raw!r}", line=meta_line)
        meta_enabled = meta_raw == "on"

    meta_threshold = 4.0
    if "meta_threshold" in header:
        mt_raw, mt_line = header["meta_threshold"]
        meta_threshold = _parse_number(mt_raw, "meta_threshold", mt_line)
        if meta_threshold < 0:
            raise ScenarioError("meta_threshold must be non-negative", line=mt_line)

    obs_radius = None
    if "obs_radius" in header:
        obs_raw, obs_line = header["obs_radius"]
        obs_radius = _parse_int(obs_raw, "obs_radius", obs_line)
        if obs_radius < 1:
            raise ScenarioError("obs_radius must be at least 1", line=obs_line)

    framing = Utilitarian(c_h=c_h) if framing_name == "util" else Deontological()
    grid = GridMap(width, len(rows), tuple(rows), start)
    return Scenario(
        grid=grid,
        coverage_fraction=coverage_fraction,
        movement_budget=movement_budget,
        framing=framing,
        metacognition_enabled=meta_enabled,
        meta_threshold=meta_threshold,
        observation_radius=obs_radius,
    )


def _format_number(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def serialize_scenario(scenario: Scenario) -> str:
    """Render a scenario back to its text form (canonical key order, defaults omitted)."""
    from .framing import Utilitarian

    out = [
        f"coverage = {_format_number(scenario.coverage_fraction)}",
        f"budget = {scenario.movement_budget}",
    ]
    if isinstance(scenario.framing, Utilitarian):
        out.append("framing = util")
        out.append(f"ch = {_format_number(scenario.framing.c_h)}")
    else:
        out.append("framing = deont")
    if scenario.metacognition_enabled:
        out.append("meta = on")
    if scenario.meta_threshold != 4:
        out.append(f"meta_threshold = {_format_number(scenario.meta_threshold)}")
    if scenario.observation_radius is not None:
        out.append(f"obs_radius = {scenario.observation_radius}")
    out.append("")
    out.extend(scenario.grid.rows_as_text())
    return "\n".join(out) + "\n"
