"""Open-task enumeration and task-to-motion-goal resolution.

A task is one interact-terminated subgoal (fetch, pot, load, deliver,
clear). Executing a task from an arbitrary hand state may need preparatory
legs: dropping a wrong held object on a free counter, then fetching the
object the task consumes. resolve_task expands a task into that leg chain
and prices it with partner-unaware distances.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from coopkitchen.core.layout import Cell, Layout
from coopkitchen.core.state import DISH, ONION, SOUP, WorldState
from coopkitchen.planning.paths import Config, config_distance


class TaskKind(Enum):
    DELIVER_SOUP = 1
    LOAD_SOUP = 2
    FETCH_DISH = 3
    POT_ONION = 4
    FETCH_ONION = 5
    CLEAR_HANDS = 6


@dataclass(frozen=True)
class Task:
    kind: TaskKind
    pot: Optional[Cell] = None

    @property
    def priority(self) -> int:
        return self.kind.value

    def __repr__(self):
        return f"Task({self.kind.name}{'' if self.pot is None else f', pot={self.pot}'})"


@dataclass(frozen=True)
class MotionGoal:
    """Stand on `cell` facing `orientation`; the faced tile is `target`."""

    cell: Cell
    orientation: tuple[int, int]
    target: Cell


@dataclass(frozen=True)
class Chain:
    """Resolved execution plan for one task from a given configuration.

    first_leg_alternatives holds every reachable goal for the first leg in
    cost order, so callers planning around the partner can fall back to the
    next-best source when the cheapest one is unreachable.
    """

    task: Task
    legs: tuple[MotionGoal, ...]
    cost: float  # path ticks plus one interact per leg
    end_config: Config
    end_held: Optional[str]
    first_leg_alternatives: tuple[MotionGoal, ...] = ()


def _row_major(cells) -> list[Cell]:
    return sorted(cells, key=lambda c: (c[1], c[0]))


def enumerate_tasks(layout: Layout, state: WorldState) -> list[Task]:
    """All open tasks in deterministic priority order.

    Levels: deliver existing soups, load ready pots, fetch dishes for
    cooking pots, pot held onions, fetch missing onions, clear useless
    hands. Ties within a level follow pot-cell row-major order.
    """
    pots_rm = _row_major(state.pots)
    helds = [p.held for p in state.players]
    counter_objs = state.counter_objects.values()

    tasks: list[Task] = []

    n_soups = helds.count(SOUP) + sum(1 for o in counter_objs if o == SOUP)
    tasks.extend(Task(TaskKind.DELIVER_SOUP) for _ in range(n_soups))

    held_dishes = helds.count(DISH)
    # a ready pot always wants loading; a still-cooking one only once a dish
    # is already in hand, which sends the dish carrier to stage at the pot
    # instead of churning its dish for lower-priority work
    loadable = [
        c
        for c in pots_rm
        if state.pots[c].ready or (held_dishes > 0 and state.pots[c].cooking)
    ]
    tasks.extend(Task(TaskKind.LOAD_SOUP, pot=c) for c in loadable)

    heating = [c for c in pots_rm if state.pots[c].cook_timer is not None]
    tasks.extend(Task(TaskKind.FETCH_DISH, pot=c) for c in heating[held_dishes:])

    filling = [c for c in pots_rm if state.pots[c].cook_timer is None and state.pots[c].onions < 3]
    held_onions = helds.count(ONION)
    if held_onions:
        tasks.extend(Task(TaskKind.POT_ONION, pot=c) for c in filling)

    missing = [c for c in filling for _ in range(3 - state.pots[c].onions)]
    tasks.extend(Task(TaskKind.FETCH_ONION, pot=c) for c in missing[held_onions:])

    for held in helds:
        if held is None:
            continue
        useful = (
            held == SOUP
            or (held == DISH and bool(heating))
            or (held == ONION and bool(filling))
        )
        if not useful:
            tasks.append(Task(TaskKind.CLEAR_HANDS))

    return tasks


def _goals_for_tile(layout: Layout, tile: Cell) -> list[MotionGoal]:
    goals = []
    for stand in layout.floor_neighbors(tile):
        orient = (tile[0] - stand[0], tile[1] - stand[1])
        goals.append(MotionGoal(cell=stand, orientation=orient, target=tile))
    return goals


def _ranked_legs(layout: Layout, config: Config, tiles: list[Cell]) -> list[tuple[MotionGoal, float]]:
    """All reachable (goal, path_cost) over candidate tiles, cheapest first."""
    ranked = []
    for tile in _row_major(tiles):
        for goal in _goals_for_tile(layout, tile):
            cost = config_distance(layout, config, goal.cell, goal.orientation)
            if cost == float("inf"):
                continue
            ranked.append(((cost, goal.target[1], goal.target[0], goal.orientation), goal, cost))
    ranked.sort(key=lambda item: item[0])
    return [(goal, cost) for _, goal, cost in ranked]


def _onion_tiles(layout: Layout, state: WorldState) -> list[Cell]:
    return layout.onion_sources + [c for c, o in state.counter_objects.items() if o == ONION]


def _dish_tiles(layout: Layout, state: WorldState) -> list[Cell]:
    return layout.dish_sources + [c for c, o in state.counter_objects.items() if o == DISH]


def _soup_tiles(layout: Layout, state: WorldState) -> list[Cell]:
    return [c for c, o in state.counter_objects.items() if o == SOUP]


def _free_counters(layout: Layout, state: WorldState) -> list[Cell]:
    return [c for c in layout.counters if c not in state.counter_objects]


def resolve_task(
    layout: Layout,
    state: WorldState,
    task: Task,
    config: Config,
    held: Optional[str],
) -> Optional[Chain]:
    """Expand a task into motion legs from (config, held); None if infeasible."""
    kind = task.kind
    legs: list[MotionGoal] = []
    first_alternatives: list[MotionGoal] = []
    cost = 0.0

    def advance(tiles: list[Cell]) -> bool:
        nonlocal config, cost
        if not tiles:
            return False
        ranked = _ranked_legs(layout, config, tiles)
        if not ranked:
            return False
        goal, leg_cost = ranked[0]
        if not legs:
            first_alternatives.extend(g for g, _ in ranked)
        legs.append(goal)
        cost += leg_cost + 1  # terminal interact
        config = (goal.cell, goal.orientation)
        return True

    def drop() -> bool:
        nonlocal held
        if not advance(_free_counters(layout, state)):
            return False
        held = None
        return True

    def fetch(tiles: list[Cell], obj: str) -> bool:
        nonlocal held
        if held == obj:
            return True
        if held is not None and not drop():
            return False
        if not advance(tiles):
            return False
        held = obj
        return True

    if kind is TaskKind.DELIVER_SOUP:
        if not fetch(_soup_tiles(layout, state), SOUP):
            return None
        if not advance(layout.serving_cells):
            return None
        held = None
    elif kind is TaskKind.LOAD_SOUP:
        if not fetch(_dish_tiles(layout, state), DISH):
            return None
        if not advance([task.pot]):
            return None
        held = SOUP
    elif kind is TaskKind.FETCH_DISH:
        if held == DISH:
            # already carrying one: use it at the task's pot, then restock
            if task.pot is None or not advance([task.pot]):
                return None
        elif held is not None and not drop():
            return None
        if not advance(_dish_tiles(layout, state)):
            return None
        held = DISH
    elif kind is TaskKind.POT_ONION:
        if not fetch(_onion_tiles(layout, state), ONION):
            return None
        if not advance([task.pot]):
            return None
        held = None
    elif kind is TaskKind.FETCH_ONION:
        if held == ONION:
            # already carrying one: pot it at the task's pot, then restock
            if task.pot is None or not advance([task.pot]):
                return None
        elif held is not None and not drop():
            return None
        if not advance(_onion_tiles(layout, state)):
            return None
        held = ONION
    elif kind is TaskKind.CLEAR_HANDS:
        if held is None:
            return None
        if not drop():
            return None
    else:  # pragma: no cover
        raise ValueError(f"unknown task kind {kind}")

    return Chain(
        task=task,
        legs=tuple(legs),
        cost=cost,
        end_config=config,
        end_held=held,
        first_leg_alternatives=tuple(first_alternatives),
    )
