"""Ethical framings of the personal-space norm.

A framing decides two things about every candidate move: whether it is legal
at all, and what it costs. The deontological variant forbids stepping into a
cell occupied by a person outside an explicit allowance of k entries; the
utilitarian variant always permits it but charges an extra c_h on top of the
physical movement cost.
"""

from __future__ import annotations

from dataclasses import dataclass

from .world import Terrain


@dataclass(frozen=True)
class Deontological:
    """Person cells are prohibited once k entries have been spent."""

    k: int = 0
    open_cost: int = 1
    barrel_cost: int = 2


@dataclass(frozen=True)
class Utilitarian:
    """Person cells are allowed at a surcharge of c_h utility."""

    c_h: float = 1.0
    open_cost: int = 1
    barrel_cost: int = 2


Framing = Deontological | Utilitarian


def is_legal_move(framing: Framing, state, dest_terrain: Terrain) -> bool:
    """True when a move onto dest_terrain is permitted from the given search state.

    Crates are impassable under every framing. Person cells are impassable
    under the deontological framing once state.violations has reached k.
    """
    if dest_terrain is Terrain.CRATE:
        return False
    if dest_terrain is Terrain.PERSON and isinstance(framing, Deontological):
        return state.violations < framing.k
    return True


def move_cost(framing: Framing, dest_terrain: Terrain) -> tuple[float, int]:
    """Return (utility cost, physical time) for entering dest_terrain.

    Open cells cost (1, 1) and barrels (2, 2). A person cell takes one time
    step; its utility is 1 + c_h under the utilitarian framing and plain 1
    under the deontological one, where legality does the normative work.
    """
    if dest_terrain is Terrain.OPEN:
        return framing.open_cost, framing.open_cost
    if dest_terrain is Terrain.BARREL:
        return framing.barrel_cost, framing.barrel_cost
    if dest_terrain is Terrain.PERSON:
        if isinstance(framing, Utilitarian):
            return 1 + framing.c_h, 1
        return 1, 1
    raise ValueError("crate cells have no movement cost")
