"""Route rendering: ASCII overlays for terminals and matplotlib SVG figures."""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Rectangle

from .world import GridMap, Position, Terrain, TERRAIN_TO_GLYPH

ARROWS = {
    (0, -1): "^",
    (0, 1): "v",
    (1, 0): ">",
    (-1, 0): "<",
}

TERRAIN_COLORS = {
    Terrain.OPEN: "#f7f5f0",
    Terrain.CRATE: "#8a5a2b",
    Terrain.BARREL: "#4a7fb5",
    Terrain.PERSON: "#e8c547",
}

ROUTE_COLOR = "#1f4fd0"


class RenderError(ValueError):
    """The trace does not fit the map it is being drawn on."""


def _check_steps(grid: GridMap, steps) -> None:
    for step in steps:
        for pos in (step.src, step.dst):
            if not grid.in_bounds(Position(*pos)):
                raise RenderError(f"route position {tuple(pos)} is outside the {grid.width}x{grid.height} grid")


def render_ascii(grid: GridMap, steps) -> str:
    """Terrain glyphs with the route overlaid as direction arrows.

    Each step marks its departure cell with ^, v, < or >; a cell departed
    more than once collapses to '*'.
    """
    _check_steps(grid, steps)
    rows = [
        [
            "S" if (x, y) == grid.start else TERRAIN_TO_GLYPH[grid.cells[y][x]]
            for x in range(grid.width)
        ]
        for y in range(grid.height)
    ]
    marked: set[Position] = set()
    for step in steps:
        src = Position(*step.src)
        dst = Position(*step.dst)
        direction = (dst.x - src.x, dst.y - src.y)
        glyph = ARROWS.get(direction)
        if glyph is None:
            raise RenderError(f"step from {tuple(src)} to {tuple(dst)} is not a unit move")
        rows[src.y][src.x] = "*" if src in marked else glyph
        marked.add(src)
    return "\n".join("".join(row) for row in rows) + "\n"


def render_svg(grid: GridMap, steps, out_path=None) -> str | None:
    """Draw terrain-colored squares with the route as a polyline, saved as SVG.

    Writes to out_path when given, otherwise returns the SVG text.
    """
    _check_steps(grid, steps)
    fig, ax = plt.subplots(figsize=(max(3, grid.width * 0.45), max(3, grid.height * 0.45)))
    for y in range(grid.height):
        for x in range(grid.width):
            ax.add_patch(
                Rectangle(
                    (x, y),
                    1,
                    1,
                    facecolor=TERRAIN_COLORS[grid.cells[y][x]],
                    edgecolor="#b0aca4",
                    linewidth=0.6,
                )
            )
    if steps:
        xs = [steps[0].src[0] + 0.5] + [step.dst[0] + 0.5 for step in steps]
        ys = [steps[0].src[1] + 0.5] + [step.dst[1] + 0.5 for step in steps]
        ax.plot(xs, ys, color=ROUTE_COLOR, linewidth=2.2, solid_capstyle="round", zorder=3)
    ax.plot(
        [grid.start.x + 0.5],
        [grid.start.y + 0.5],
        marker="o",
        color=ROUTE_COLOR,
        markersize=7,
        zorder=4,
    )
    ax.set_xlim(0, grid.width)
    ax.set_ylim(grid.height, 0)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout(pad=0.2)
    try:
        if out_path is not None:
            fig.savefig(out_path, format="svg")
            return None
        buf = io.StringIO()
        fig.savefig(buf, format="svg")
        return buf.getvalue()
    finally:
        plt.close(fig)
