"""Simultaneous-move transition function for the two-player kitchen."""

from __future__ import annotations

from dataclasses import dataclass

from coopkitchen.core.layout import COUNTER, DISH_SOURCE, ONION_SOURCE, POT, SERVING, Layout
from coopkitchen.core.state import (
    COLLISION,
    COOK_STARTED,
    COOK_TIME,
    DIRECTION,
    DISH,
    NORTH,
    OBJECT_PICKED_UP,
    OBJECT_PLACED,
    ONION,
    ONION_POTTED,
    SOUP,
    SOUP_DELIVERED,
    SOUP_PICKED_UP,
    Action,
    Event,
    JointAction,
    PlayerState,
    PotState,
    WorldState,
    check_state,
)

DELIVERY_REWARD = 20


class InvalidState(ValueError):
    """step() was handed a state that violates its preconditions."""


@dataclass(frozen=True, slots=True)
class StepOutcome:
    next_state: WorldState
    reward: int
    events: tuple[Event, ...]


def initial_state(layout: Layout) -> WorldState:
    """Both players at their spawn cells facing north with empty hands."""
    players = tuple(PlayerState(position=s, orientation=NORTH, held=None) for s in layout.spawn_points)
    pots = {cell: PotState() for cell in layout.pots}
    return WorldState(players=players, pots=pots, counter_objects={}, tick=0)


def validate_state(layout: Layout, state: WorldState) -> None:
    """Full invariant check, raising InvalidState on any violation."""
    try:
        check_state(layout, state)
    except ValueError as exc:
        raise InvalidState(str(exc)) from None


def step(layout: Layout, state: WorldState, actions: JointAction) -> StepOutcome:
    """Resolve one simultaneous joint action.

    Movement: both proposals are judged against the pre-step positions; a
    proposal into a non-floor cell or into the other player's current cell
    is cancelled (the mover still turns to face that direction). Two
    surviving proposals onto the same cell cancel each other, and a swap
    attempt cancels both; either case emits a collision event.

    Interacts resolve after movement, player 0 before player 1, against the
    already-updated tile contents. Pot timers that were running when the
    step began then count down by one; a timer reaching 0 marks the soup
    ready. Fresh timers (third onion potted this step) start at COOK_TIME
    and do not count down until the next step.
    """
    p0, p1 = state.players
    if p0.position == p1.position:
        raise InvalidState(f"players share cell {p0.position}")
    for i, p in enumerate((p0, p1)):
        if not layout.is_floor(p.position):
            raise InvalidState(f"player {i} at non-floor cell {p.position}")

    events: list[Event] = []
    positions = [p0.position, p1.position]
    orientations = [p0.orientation, p1.orientation]

    targets: list = [None, None]
    for i, action in enumerate(actions):
        d = DIRECTION.get(action)
        if d is None:
            continue
        orientations[i] = d
        targets[i] = (positions[i][0] + d[0], positions[i][1] + d[1])

    t0, t1 = targets
    if t0 is not None and t0 == t1 and layout.is_floor(t0):
        events.append(Event(COLLISION, None, t0))
        targets = [None, None]
    elif t0 == p1.position and t1 == p0.position and t0 is not None:
        events.append(Event(COLLISION, None, None))
        targets = [None, None]
    for i, tgt in enumerate(targets):
        if tgt is None:
            continue
        if layout.is_floor(tgt) and tgt != state.players[1 - i].position:
            positions[i] = tgt

    helds = [p0.held, p1.held]
    pots = state.pots
    counters = state.counter_objects
    pots_changed = False
    counters_changed = False
    started_this_step: set = set()
    reward = 0

    for i, action in enumerate(actions):
        if action is not Action.INTERACT:
            continue
        face = (
            positions[i][0] + orientations[i][0],
            positions[i][1] + orientations[i][1],
        )
        if not layout.in_bounds(face):
            continue
        tile = layout.tile(face)
        held = helds[i]
        if tile == ONION_SOURCE and held is None:
            helds[i] = ONION
            events.append(Event(OBJECT_PICKED_UP, i, face))
        elif tile == DISH_SOURCE and held is None:
            helds[i] = DISH
            events.append(Event(OBJECT_PICKED_UP, i, face))
        elif tile == POT:
            pot = pots[face]
            if held == ONION and pot.cook_timer is None and pot.onions < 3:
                if not pots_changed:
                    pots = dict(pots)
                    pots_changed = True
                onions = pot.onions + 1
                if onions == 3:
                    pots[face] = PotState(onions=3, cook_timer=COOK_TIME)
                    started_this_step.add(face)
                    events.append(Event(ONION_POTTED, i, face))
                    events.append(Event(COOK_STARTED, i, face))
                else:
                    pots[face] = PotState(onions=onions, cook_timer=None)
                    events.append(Event(ONION_POTTED, i, face))
                helds[i] = None
            elif held == DISH and pot.ready:
                if not pots_changed:
                    pots = dict(pots)
                    pots_changed = True
                pots[face] = PotState()
                helds[i] = SOUP
                events.append(Event(SOUP_PICKED_UP, i, face))
        elif tile == SERVING and held == SOUP:
            helds[i] = None
            reward += DELIVERY_REWARD
            events.append(Event(SOUP_DELIVERED, i, face))
        elif tile == COUNTER:
            if held is not None and face not in counters:
                if not counters_changed:
                    counters = dict(counters)
                    counters_changed = True
                counters[face] = held
                helds[i] = None
                events.append(Event(OBJECT_PLACED, i, face))
            elif held is None and face in counters:
                if not counters_changed:
                    counters = dict(counters)
                    counters_changed = True
                helds[i] = counters.pop(face)
                events.append(Event(OBJECT_PICKED_UP, i, face))
        # any other combination is a silent no-op

    ticking = [
        cell
        for cell, pot in pots.items()
        if pot.cook_timer is not None and pot.cook_timer > 0 and cell not in started_this_step
    ]
    if ticking:
        if not pots_changed:
            pots = dict(pots)
        for cell in ticking:
            pot = pots[cell]
            pots[cell] = PotState(onions=pot.onions, cook_timer=pot.cook_timer - 1)

    next_state = WorldState(
        players=(
            PlayerState(position=positions[0], orientation=orientations[0], held=helds[0]),
            PlayerState(position=positions[1], orientation=orientations[1], held=helds[1]),
        ),
        pots=pots,
        counter_objects=counters,
        tick=state.tick + 1,
    )
    return StepOutcome(next_state=next_state, reward=reward, events=tuple(events))
