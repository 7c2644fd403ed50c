import random

import pytest

from coopkitchen.core import (
    Action,
    DISH,
    InvariantViolation,
    ONION,
    ParseError,
    bundled_layout,
    deserialize_state,
    initial_state,
    parse_layout,
    serialize_state,
    step,
)
from coopkitchen.core.state import ALL_ACTIONS

from tests.support import make_state

LAYOUT = bundled_layout("room")


def random_reachable_state(layout, n_steps, seed):
    rng = random.Random(seed)
    state = initial_state(layout)
    for _ in range(n_steps):
        state = step(layout, state, (rng.choice(ALL_ACTIONS), rng.choice(ALL_ACTIONS))).next_state
    return state


@pytest.mark.parametrize("seed", range(20))
def test_round_trip_random_states(seed):
    state = random_reachable_state(LAYOUT, 300, seed)
    text = serialize_state(state)
    assert deserialize_state(text, LAYOUT) == state


def test_canonical_form_is_byte_stable():
    s1 = make_state(LAYOUT, ((2, 2), "N", ONION), ((5, 4), "E", None), counters={(0, 2): DISH})
    s2 = make_state(LAYOUT, ((2, 2), "N", ONION), ((5, 4), "E", None), counters={(0, 2): DISH})
    assert s1 == s2
    assert serialize_state(s1) == serialize_state(s2)


def test_counter_order_does_not_change_bytes():
    s1 = make_state(LAYOUT, ((2, 2), "N", None), ((5, 4), "E", None))
    a = dict(s1.counter_objects)
    a[(0, 2)] = DISH
    a[(8, 2)] = ONION
    b = {(8, 2): ONION, (0, 2): DISH}
    from dataclasses import replace

    assert serialize_state(replace(s1, counter_objects=a)) == serialize_state(
        replace(s1, counter_objects=b)
    )


def test_object_on_floor_cell_rejected():
    s = make_state(LAYOUT, ((2, 2), "N", None), ((5, 4), "E", None))
    text = serialize_state(s)
    bad = text.replace('"counters":{}', '"counters":{"2,3":"onion"}')
    with pytest.raises(InvariantViolation):
        deserialize_state(bad, LAYOUT)


def test_players_on_same_cell_rejected():
    s = make_state(LAYOUT, ((2, 2), "N", None), ((5, 4), "E", None))
    text = serialize_state(s).replace("[5,4]", "[2,2]")
    with pytest.raises(InvariantViolation):
        deserialize_state(text, LAYOUT)


def test_garbage_text_gives_parse_error():
    with pytest.raises(ParseError):
        deserialize_state("{not json", LAYOUT)
    with pytest.raises(ParseError):
        deserialize_state('{"players": []}', LAYOUT)


def test_unknown_held_object_rejected():
    s = make_state(LAYOUT, ((2, 2), "N", ONION), ((5, 4), "E", None))
    text = serialize_state(s).replace('"onion"', '"cake"')
    with pytest.raises(ParseError):
        deserialize_state(text, LAYOUT)
