"""Shared helpers for the test suite: state builders and the fuzz oracle."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import replace

from coopkitchen.core import (
    Action,
    DISH,
    ONION,
    PlayerState,
    PotState,
    SOUP,
    WorldState,
    initial_state,
    step,
    validate_state,
)
from coopkitchen.core.state import ALL_ACTIONS, ORIENT_FROM_NAME, SOUP_DELIVERED, SOUP_PICKED_UP


def make_state(layout, p0, p1, pots=None, counters=None, tick=0):
    """Build a WorldState from compact (pos, orient_name, held) player specs."""
    base = initial_state(layout)
    players = tuple(
        PlayerState(position=pos, orientation=ORIENT_FROM_NAME[orient], held=held)
        for pos, orient, held in (p0, p1)
    )
    pot_map = dict(base.pots)
    for cell, (onions, timer) in (pots or {}).items():
        pot_map[cell] = PotState(onions=onions, cook_timer=timer)
    state = WorldState(players=players, pots=pot_map, counter_objects=dict(counters or {}), tick=tick)
    validate_state(layout, state)
    return state


def object_census(state) -> Counter:
    """Multiset of loose objects: held, on counters, and onions inside pots."""
    census = Counter()
    for p in state.players:
        if p.held is not None:
            census[p.held] += 1
    for obj in state.counter_objects.values():
        census[obj] += 1
    for pot in state.pots.values():
        census[ONION] += pot.onions
    return census


def fuzz_steps(layout, n_steps: int, seed: int) -> int:
    """Run n_steps random joint actions, checking every invariant each step.

    Returns the total reward accumulated. Raises AssertionError on the first
    invariant violation.
    """
    rng = random.Random(seed)
    state = initial_state(layout)
    total = 0
    for _ in range(n_steps):
        actions = (rng.choice(ALL_ACTIONS), rng.choice(ALL_ACTIONS))
        before = object_census(state)
        outcome = step(layout, state, actions)
        nxt = outcome.next_state

        assert outcome.reward in (0, 20, 40)
        deliveries = sum(1 for e in outcome.events if e.kind == SOUP_DELIVERED)
        assert outcome.reward == 20 * deliveries

        p0, p1 = nxt.players
        assert p0.position != p1.position
        assert layout.is_floor(p0.position) and layout.is_floor(p1.position)
        validate_state(layout, nxt)

        after = object_census(nxt)
        onion_pickups = sum(
            1 for e in outcome.events if e.kind == "object_picked_up" and layout.tile(e.cell) == "O"
        )
        dish_pickups = sum(
            1 for e in outcome.events if e.kind == "object_picked_up" and layout.tile(e.cell) == "D"
        )
        soups_made = sum(1 for e in outcome.events if e.kind == SOUP_PICKED_UP)
        # dispensers add objects; a soup pickup turns 3 potted onions + 1 dish
        # into 1 soup; a delivery removes a soup
        ctx = (before, after, outcome.events)
        assert after[ONION] - before[ONION] == onion_pickups - 3 * soups_made, ctx
        assert after[DISH] - before[DISH] == dish_pickups - soups_made, ctx
        assert after[SOUP] - before[SOUP] == soups_made - deliveries, ctx

        state = nxt
        total += outcome.reward
    return total


def seed_soup_in_hand(layout, agent=0):
    """State where `agent` holds a soup and stands at a serving access cell."""
    serve = layout.serving_cells[0]
    stands = [c for c in layout.floor_neighbors(serve)]
    stand = stands[0]
    orient = (serve[0] - stand[0], serve[1] - stand[1])
    base = initial_state(layout)
    other = base.players[1 - agent].position
    if other == stand:
        other = next(c for c in layout.floor_cells if c != stand)
    players = [None, None]
    players[agent] = PlayerState(position=stand, orientation=orient, held=SOUP)
    players[1 - agent] = PlayerState(position=other, orientation=(0, -1), held=None)
    state = WorldState(players=tuple(players), pots=dict(base.pots), counter_objects={}, tick=0)
    validate_state(layout, state)
    return state


def run_policy_episode(layout, policies, horizon, start=None):
    """Roll policies forward; returns (total_reward, final_state)."""
    from coopkitchen.core import History

    state = start or initial_state(layout)
    history = History()
    total = 0
    for _ in range(horizon):
        actions = tuple(p.act(history, state) for p in policies)
        outcome = step(layout, state, actions)
        history.append(state, actions)
        state = outcome.next_state
        total += outcome.reward
    return total, state
