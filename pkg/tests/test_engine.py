import pytest

from coopkitchen.core import (
    Action,
    COOK_TIME,
    DISH,
    History,
    InvalidState,
    ONION,
    PlayerState,
    SOUP,
    WorldState,
    bundled_layout,
    initial_state,
    parse_layout,
    step,
)
from coopkitchen.core.state import COLLISION, SOUP_DELIVERED

from tests.support import fuzz_steps, make_state

LAYOUT = parse_layout(
    """\
XXXXXXX
XO1 PXX
X2   SX
XXXDXXX
""",
    name="t",
)

STAY2 = (Action.STAY, Action.STAY)


def test_initial_state():
    s = initial_state(LAYOUT)
    assert s.players[0].position == (2, 1)
    assert s.players[1].position == (1, 2)
    assert all(p.held is None for p in s.players)
    assert all(p.orientation == (0, -1) for p in s.players)
    assert all(pot.onions == 0 and pot.cook_timer is None for pot in s.pots.values())
    assert s.counter_objects == {} and s.tick == 0
    assert initial_state(LAYOUT) == s


def test_both_stay_only_tick_advances():
    s = initial_state(LAYOUT)
    out = step(LAYOUT, s, STAY2)
    assert out.next_state.players == s.players
    assert out.next_state.counter_objects == s.counter_objects
    assert out.next_state.pots == s.pots
    assert out.next_state.tick == 1
    assert out.reward == 0 and out.events == ()


def test_move_and_blocked_move_updates_orientation():
    s = initial_state(LAYOUT)
    out = step(LAYOUT, s, (Action.RIGHT, Action.UP))
    p0, p1 = out.next_state.players
    assert p0.position == (3, 1) and p0.orientation == (1, 0)
    # player 1 walks into the onion dispenser: blocked but turns
    assert p1.position == (1, 2) and p1.orientation == (0, -1)


def test_move_into_partner_cell_is_cancelled_silently():
    s = make_state(LAYOUT, ((2, 1), "N", None), ((2, 2), "N", None))
    out = step(LAYOUT, s, (Action.STAY, Action.UP))
    assert out.next_state.players[1].position == (2, 2)
    assert out.next_state.players[1].orientation == (0, -1)
    assert not any(e.kind == COLLISION for e in out.events)


def test_swap_proposal_collides():
    s = make_state(LAYOUT, ((2, 1), "N", None), ((3, 1), "N", None))
    out = step(LAYOUT, s, (Action.RIGHT, Action.LEFT))
    p0, p1 = out.next_state.players
    assert p0.position == (2, 1) and p1.position == (3, 1)
    assert any(e.kind == COLLISION for e in out.events)
    # orientations still turn toward the attempted moves
    assert p0.orientation == (1, 0) and p1.orientation == (-1, 0)


def test_same_cell_proposal_collides():
    s = make_state(LAYOUT, ((2, 2), "N", None), ((4, 2), "N", None))
    out = step(LAYOUT, s, (Action.RIGHT, Action.LEFT))
    p0, p1 = out.next_state.players
    assert p0.position == (2, 2) and p1.position == (4, 2)
    assert any(e.kind == COLLISION and e.cell == (3, 2) for e in out.events)


def test_same_wall_cell_proposals_do_not_collide():
    # both walk into the same counter cell: plain blocked moves, no collision
    s = make_state(LAYOUT, ((2, 2), "N", None), ((4, 2), "N", None))
    out = step(LAYOUT, s, (Action.DOWN, Action.LEFT))
    assert out.next_state.players[0].position == (2, 2)
    assert not any(e.kind == COLLISION for e in out.events)


def test_dispenser_pickups():
    s = make_state(LAYOUT, ((1, 2), "N", None), ((3, 2), "S", None))
    out = step(LAYOUT, s, (Action.INTERACT, Action.INTERACT))
    assert out.next_state.players[0].held == ONION
    assert out.next_state.players[1].held == DISH


def test_cook_timer_ready_exactly_at_cook_time():
    pot_cell = LAYOUT.pots[0]
    s = make_state(
        LAYOUT,
        ((2, 1), "N", None),
        ((1, 2), "N", None),
        pots={pot_cell: (3, COOK_TIME)},
    )
    for i in range(1, COOK_TIME + 1):
        s = step(LAYOUT, s, STAY2).next_state
        pot = s.pots[pot_cell]
        if i < COOK_TIME:
            assert not pot.ready, f"ready early at step {i}"
            assert pot.cook_timer == COOK_TIME - i
        else:
            assert pot.ready and pot.cook_timer == 0


def test_third_onion_starts_timer_and_is_ready_20_ticks_later():
    pot_cell = LAYOUT.pots[0]  # (4, 1)
    s = make_state(
        LAYOUT,
        ((3, 1), "E", ONION),
        ((1, 2), "N", None),
        pots={pot_cell: (2, None)},
    )
    out = step(LAYOUT, s, (Action.INTERACT, Action.STAY))
    potted_tick = out.next_state.tick
    pot = out.next_state.pots[pot_cell]
    assert pot.onions == 3 and pot.cook_timer == COOK_TIME and not pot.ready
    s = out.next_state
    while not s.pots[pot_cell].ready:
        s = step(LAYOUT, s, STAY2).next_state
    assert s.tick - potted_tick == COOK_TIME


def test_soup_pickup_resets_pot():
    pot_cell = LAYOUT.pots[0]
    s = make_state(
        LAYOUT,
        ((3, 1), "E", DISH),
        ((1, 2), "N", None),
        pots={pot_cell: (3, 0)},
    )
    out = step(LAYOUT, s, (Action.INTERACT, Action.STAY))
    assert out.next_state.players[0].held == SOUP
    pot = out.next_state.pots[pot_cell]
    assert pot.onions == 0 and pot.cook_timer is None


def test_delivery_reward_20():
    s = make_state(LAYOUT, ((4, 2), "E", SOUP), ((1, 2), "N", None))
    out = step(LAYOUT, s, (Action.INTERACT, Action.STAY))
    assert out.reward == 20
    assert out.next_state.players[0].held is None
    assert any(e.kind == SOUP_DELIVERED and e.player == 0 for e in out.events)


def test_counter_place_and_pickup():
    s = make_state(LAYOUT, ((1, 2), "W", ONION), ((3, 2), "N", None))
    out = step(LAYOUT, s, (Action.INTERACT, Action.STAY))
    assert out.next_state.counter_objects == {(0, 2): ONION}
    assert out.next_state.players[0].held is None
    out2 = step(LAYOUT, out.next_state, (Action.INTERACT, Action.STAY))
    assert out2.next_state.players[0].held == ONION
    assert out2.next_state.counter_objects == {}


def test_place_on_occupied_counter_is_noop():
    s = make_state(
        LAYOUT,
        ((1, 2), "W", ONION),
        ((3, 2), "N", None),
        counters={(0, 2): DISH},
    )
    out = step(LAYOUT, s, (Action.INTERACT, Action.STAY))
    assert out.next_state.players[0].held == ONION
    assert out.next_state.counter_objects == {(0, 2): DISH}


def test_simultaneous_interact_player0_first():
    # one ready soup, both players offer a dish: player 0 takes it,
    # player 1's interact hits the already-reset pot and is a no-op
    pot_cell = LAYOUT.pots[0]
    s = make_state(
        LAYOUT,
        ((3, 1), "E", DISH),
        ((4, 2), "N", DISH),
        pots={pot_cell: (3, 0)},
    )
    out = step(LAYOUT, s, (Action.INTERACT, Action.INTERACT))
    assert out.next_state.players[0].held == SOUP
    assert out.next_state.players[1].held == DISH


def test_interact_on_nothing_is_noop():
    s = make_state(LAYOUT, ((2, 1), "S", None), ((1, 2), "S", None))
    out = step(LAYOUT, s, (Action.INTERACT, Action.INTERACT))
    assert out.next_state.players[0].held is None
    assert out.reward == 0


def test_step_is_pure():
    s = make_state(LAYOUT, ((2, 1), "N", None), ((1, 2), "N", None))
    a = (Action.RIGHT, Action.INTERACT)
    out1 = step(LAYOUT, s, a)
    out2 = step(LAYOUT, s, a)
    assert out1 == out2
    assert s.players[0].position == (2, 1)  # input untouched


def test_invalid_state_rejected():
    s = initial_state(LAYOUT)
    bad = WorldState(
        players=(s.players[0], s.players[0]),
        pots=s.pots,
        counter_objects={},
        tick=0,
    )
    with pytest.raises(InvalidState):
        step(LAYOUT, bad, STAY2)


def test_replay_reproduces_final_state():
    import random

    rng = random.Random(7)
    s = initial_state(LAYOUT)
    history = History()
    from coopkitchen.core.state import ALL_ACTIONS

    state = s
    for _ in range(200):
        actions = (rng.choice(ALL_ACTIONS), rng.choice(ALL_ACTIONS))
        history.append(state, actions)
        state = step(LAYOUT, state, actions).next_state
    replayed = s
    for recorded_state, actions in history.entries:
        assert recorded_state == replayed
        replayed = step(LAYOUT, replayed, actions).next_state
    assert replayed == state


@pytest.mark.parametrize("name", ["bottleneck", "room", "center_objects", "center_pots"])
def test_fuzz_invariants_small(name):
    fuzz_steps(bundled_layout(name), 5_000, seed=hash(name) % 2**32)
