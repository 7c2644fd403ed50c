"""Dynamic world state, actions, events, and canonical state serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple, Optional

from coopkitchen.core.layout import COUNTER, Cell, Layout

ONION = "onion"
DISH = "dish"
SOUP = "soup"
HELD_KINDS = (ONION, DISH, SOUP)

COOK_TIME = 20


class Action(Enum):
    UP = "UP"
    DOWN = "DOWN"
    LEFT = "LEFT"
    RIGHT = "RIGHT"
    STAY = "STAY"
    INTERACT = "INTERACT"


ALL_ACTIONS = tuple(Action)
MOVE_ACTIONS = (Action.UP, Action.DOWN, Action.LEFT, Action.RIGHT)

# Unit direction vectors; y grows downward so UP is (0, -1).
DIRECTION = {
    Action.UP: (0, -1),
    Action.DOWN: (0, 1),
    Action.LEFT: (-1, 0),
    Action.RIGHT: (1, 0),
}
NORTH, SOUTH, WEST, EAST = (0, -1), (0, 1), (-1, 0), (1, 0)
ORIENT_NAMES = {NORTH: "N", SOUTH: "S", WEST: "W", EAST: "E"}
ORIENT_FROM_NAME = {v: k for k, v in ORIENT_NAMES.items()}
ORIENTATIONS = (NORTH, SOUTH, WEST, EAST)


def add(cell: Cell, d: tuple[int, int]) -> Cell:
    return (cell[0] + d[0], cell[1] + d[1])


class ParseError(ValueError):
    """Malformed state text."""


class InvariantViolation(ValueError):
    """Structurally parseable state that breaks a world invariant."""


@dataclass(frozen=True, slots=True)
class PotState:
    """Contents of one pot.

    cook_timer is None while the pot is filling, counts down from COOK_TIME
    once the third onion lands, and 0 means the soup is ready for pickup.
    """

    onions: int = 0
    cook_timer: Optional[int] = None

    @property
    def ready(self) -> bool:
        return self.cook_timer == 0

    @property
    def cooking(self) -> bool:
        return self.cook_timer is not None and self.cook_timer > 0

    def check(self) -> None:
        if not 0 <= self.onions <= 3:
            raise InvariantViolation(f"pot onions out of range: {self.onions}")
        if self.cook_timer is not None:
            if self.onions != 3:
                raise InvariantViolation("cook timer active with fewer than 3 onions")
            if not 0 <= self.cook_timer <= COOK_TIME:
                raise InvariantViolation(f"cook timer out of range: {self.cook_timer}")


@dataclass(frozen=True, slots=True)
class PlayerState:
    position: Cell
    orientation: tuple[int, int] = NORTH
    held: Optional[str] = None

    def facing(self) -> Cell:
        return add(self.position, self.orientation)


@dataclass(frozen=True, slots=True)
class WorldState:
    players: tuple[PlayerState, PlayerState]
    pots: dict[Cell, PotState]
    counter_objects: dict[Cell, str]
    tick: int = 0

    def player(self, i: int) -> PlayerState:
        return self.players[i]

    def with_player(self, i: int, p: PlayerState) -> "WorldState":
        players = (p, self.players[1]) if i == 0 else (self.players[0], p)
        return replace(self, players=players)


class Event(NamedTuple):
    """One engine event; player is None for events involving both players."""

    kind: str
    player: Optional[int] = None
    cell: Optional[Cell] = None


ONION_POTTED = "onion_potted"
COOK_STARTED = "cook_started"
SOUP_PICKED_UP = "soup_picked_up"
SOUP_DELIVERED = "soup_delivered"
OBJECT_PLACED = "object_placed"
OBJECT_PICKED_UP = "object_picked_up"
COLLISION = "collision"

JointAction = tuple[Action, Action]


@dataclass
class History:
    """Past (state, joint action) pairs; the newest entry is the most recent step."""

    entries: list[tuple[WorldState, JointAction]]

    def __init__(self, entries: Optional[list[tuple[WorldState, JointAction]]] = None):
        self.entries = list(entries) if entries else []

    def append(self, state: WorldState, actions: JointAction) -> None:
        self.entries.append((state, actions))

    def __len__(self) -> int:
        return len(self.entries)

    def last(self, n: int) -> list[tuple[WorldState, JointAction]]:
        return self.entries[-n:]


def _cell_key(cell: Cell) -> str:
    return f"{cell[0]},{cell[1]}"


def _parse_cell_key(key: str) -> Cell:
    try:
        x, y = key.split(",")
        return (int(x), int(y))
    except ValueError:
        raise ParseError(f"bad cell key {key!r}") from None


def state_to_dict(state: WorldState) -> dict:
    return {
        "players": [
            {
                "pos": list(p.position),
                "orient": ORIENT_NAMES[p.orientation],
                "held": p.held,
            }
            for p in state.players
        ],
        "pots": {
            _cell_key(c): {"onions": p.onions, "cook_timer": p.cook_timer}
            for c, p in state.pots.items()
        },
        "counters": {_cell_key(c): obj for c, obj in state.counter_objects.items()},
        "tick": state.tick,
    }


def serialize_state(state: WorldState) -> str:
    """Canonical single-line text form; byte-stable for equal states."""
    return json.dumps(state_to_dict(state), sort_keys=True, separators=(",", ":"))


def state_from_dict(data: dict, layout: Layout) -> WorldState:
    try:
        raw_players = data["players"]
        raw_pots = data["pots"]
        raw_counters = data["counters"]
        tick = data["tick"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing state field: {exc}") from None

    if len(raw_players) != 2:
        raise ParseError(f"expected 2 players, got {len(raw_players)}")
    players = []
    for i, rp in enumerate(raw_players):
        try:
            pos = tuple(rp["pos"])
            orient = ORIENT_FROM_NAME[rp["orient"]]
            held = rp["held"]
        except (KeyError, TypeError):
            raise ParseError(f"malformed player {i}") from None
        if held is not None and held not in HELD_KINDS:
            raise ParseError(f"player {i} holds unknown object {held!r}")
        players.append(PlayerState(position=pos, orientation=orient, held=held))

    pots = {}
    for key, rp in raw_pots.items():
        cell = _parse_cell_key(key)
        try:
            pots[cell] = PotState(onions=rp["onions"], cook_timer=rp["cook_timer"])
        except (KeyError, TypeError):
            raise ParseError(f"malformed pot at {key}") from None

    counters = {}
    for key, obj in raw_counters.items():
        cell = _parse_cell_key(key)
        if obj not in HELD_KINDS:
            raise ParseError(f"counter at {key} holds unknown object {obj!r}")
        counters[cell] = obj

    if not isinstance(tick, int) or tick < 0:
        raise ParseError(f"bad tick {tick!r}")

    state = WorldState(players=(players[0], players[1]), pots=pots, counter_objects=counters, tick=tick)
    check_state(layout, state)
    return state


def deserialize_state(text: str, layout: Layout) -> WorldState:
    """Inverse of serialize_state; validates all world invariants for the layout."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid state text at char {exc.pos}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ParseError("state text is not an object")
    return state_from_dict(data, layout)


def check_state(layout: Layout, state: WorldState) -> None:
    """Raise InvariantViolation unless the state is consistent with the layout."""
    p0, p1 = state.players
    for i, p in enumerate((p0, p1)):
        if not layout.is_floor(p.position):
            raise InvariantViolation(f"player {i} at non-floor cell {p.position}")
        if p.orientation not in ORIENTATIONS:
            raise InvariantViolation(f"player {i} has bad orientation {p.orientation}")
        if p.held is not None and p.held not in HELD_KINDS:
            raise InvariantViolation(f"player {i} holds unknown object {p.held!r}")
    if p0.position == p1.position:
        raise InvariantViolation(f"players share cell {p0.position}")

    layout_pots = set(layout.pots)
    for cell, pot in state.pots.items():
        if cell not in layout_pots:
            raise InvariantViolation(f"pot state at non-pot cell {cell}")
        pot.check()
    for cell in layout_pots - set(state.pots):
        raise InvariantViolation(f"missing pot state for pot cell {cell}")

    for cell, obj in state.counter_objects.items():
        if not layout.in_bounds(cell) or layout.tile(cell) != COUNTER:
            raise InvariantViolation(f"object on non-counter cell {cell}")
        if obj not in HELD_KINDS:
            raise InvariantViolation(f"unknown counter object {obj!r} at {cell}")

    if state.tick < 0:
        raise InvariantViolation(f"negative tick {state.tick}")
