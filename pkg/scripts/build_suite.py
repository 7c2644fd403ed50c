#!/usr/bin/env python3
"""Regenerate the bundled scenario suite under src/coopkitchen/data/suite.

Every scenario is an explicit snapshot file so the suite is byte-stable and
reviewable; rerun this script only when the layouts or the setups change,
then re-calibrate with scripts/calibrate_suite.py.
"""

from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from coopkitchen.core import (  # noqa: E402
    DISH,
    ONION,
    SOUP,
    PlayerState,
    PotState,
    WorldState,
    bundled_layout,
    serialize_state,
    validate_state,
)
from coopkitchen.core.state import ORIENT_FROM_NAME  # noqa: E402
from coopkitchen.harness import Scenario, SuccessPredicate  # noqa: E402

OUT = REPO / "src" / "coopkitchen" / "data" / "suite"


def snap(layout, p0, p1, pots=None, counters=None):
    """Build and serialize a snapshot from ((pos, orient, held), ...) specs."""
    players = tuple(
        PlayerState(position=tuple(pos), orientation=ORIENT_FROM_NAME[orient], held=held)
        for pos, orient, held in (p0, p1)
    )
    pot_map = {cell: PotState() for cell in layout.pots}
    for cell, (onions, timer) in (pots or {}).items():
        pot_map[cell] = PotState(onions=onions, cook_timer=timer)
    state = WorldState(players=players, pots=pot_map, counter_objects=dict(counters or {}), tick=0)
    validate_state(layout, state)
    return serialize_state(state)


def scenario(layout_name, setup, category, partner, predicate, horizon, variants, tested=0):
    return Scenario(
        id=f"{layout_name}-{setup}",
        layout_name=layout_name,
        category=category,
        tested_agent_index=tested,
        partner_spec=partner,
        predicate=predicate,
        horizon=horizon,
        variants=tuple(variants),
    )


def build_bottleneck():
    lay = bundled_layout("bottleneck")
    pot_a, pot_b = (7, 1), (7, 3)  # right wall pots
    s = []
    # SR: a cooked soup was left on a counter; pick it up and deliver it
    s.append(scenario(
        "bottleneck", "sr-counter-soup", "SR", "scripted:stationary",
        SuccessPredicate("delivered_within", 60), 60,
        [
            snap(lay, ((2, 2), "N", None), ((6, 5), "S", None), counters={(4, 2): SOUP}),
            snap(lay, ((2, 2), "W", None), ((6, 5), "S", None), counters={(0, 2): SOUP}),
        ],
    ))
    # SR: the onion the pot needs is already out on a counter
    s.append(scenario(
        "bottleneck", "sr-needed-object", "SR", "scripted:stationary",
        SuccessPredicate("holds_object_within", 20, object=ONION), 30,
        [
            snap(lay, ((5, 1), "S", None), ((6, 4), "N", DISH),
                 pots={pot_a: (2, None)}, counters={(4, 1): ONION}),
            snap(lay, ((5, 3), "S", None), ((6, 4), "N", DISH),
                 pots={pot_b: (2, None)}, counters={(4, 4): ONION}),
        ],
    ))
    # SR: holding a dish nothing needs; drop it
    s.append(scenario(
        "bottleneck", "sr-wrong-held-object", "SR", "scripted:stationary",
        SuccessPredicate("dropped_held_within", 20), 30,
        [
            snap(lay, ((3, 3), "N", DISH), ((6, 5), "N", None)),
            snap(lay, ((5, 2), "E", DISH), ((1, 2), "N", None)),
        ],
    ))
    # SR: started from an odd corner; resume normal play
    s.append(scenario(
        "bottleneck", "sr-unusual-location", "SR", "scripted:stationary",
        SuccessPredicate("holds_object_within", 30, object=ONION), 40,
        [
            snap(lay, ((3, 5), "S", None), ((6, 5), "N", None)),
            snap(lay, ((6, 5), "E", None), ((1, 2), "N", None)),
        ],
    ))
    # SR: heavy counter clutter; keep playing as normal
    s.append(scenario(
        "bottleneck", "sr-counter-clutter", "SR", "scripted:stationary",
        SuccessPredicate("holds_object_within", 25, object=ONION), 40,
        [
            snap(lay, ((5, 2), "N", None), ((1, 2), "N", None),
                 counters={(4, 1): ONION, (4, 2): DISH, (4, 4): ONION, (0, 2): DISH}),
            snap(lay, ((6, 3), "W", None), ((2, 2), "N", None),
                 counters={(4, 2): ONION, (4, 4): DISH, (8, 5): ONION, (0, 3): ONION}),
        ],
    ))
    # AR: partner camps the dish dispenser; take the counter dish instead
    s.append(scenario(
        "bottleneck", "ar-dispenser-blocked", "AR", "scripted:blocker:dish",
        SuccessPredicate("holds_object_within", 30, object=DISH), 40,
        [
            snap(lay, ((2, 3), "S", None), ((1, 4), "S", None),
                 pots={pot_a: (3, 15)}, counters={(4, 2): DISH}),
            snap(lay, ((2, 2), "S", None), ((1, 4), "S", None),
                 pots={pot_b: (3, 10)}, counters={(4, 4): DISH}),
        ],
    ))
    # AR: both hold dishes but the partner is closer to the ready pot
    s.append(scenario(
        "bottleneck", "ar-duplicate-object", "AR", "tom:mle_like",
        SuccessPredicate("dropped_held_within", 30), 40,
        [
            snap(lay, ((3, 3), "N", DISH), ((6, 2), "N", DISH), pots={pot_a: (3, 0)}),
            snap(lay, ((2, 2), "N", DISH), ((6, 4), "N", DISH), pots={pot_b: (3, 0)}),
        ],
    ))
    # AR: standing on a stubborn deliverer's path; step aside
    s.append(scenario(
        "bottleneck", "ar-blocking-path", "AR", "scripted:stubborn_deliverer",
        SuccessPredicate("cell_vacated_within", 10, cell=(5, 2)), 20,
        [
            snap(lay, ((5, 2), "S", None), ((5, 3), "N", SOUP)),
            snap(lay, ((5, 2), "N", None), ((5, 1), "S", SOUP)),
        ],
    ))
    # AMR: partner goes AFK early; finish the cook alone
    s.append(scenario(
        "bottleneck", "amr-partner-afk", "AMR", "scripted:stationary_after:3",
        SuccessPredicate("delivered_within", 60), 60,
        [
            snap(lay, ((5, 2), "N", None), ((1, 2), "N", None),
                 pots={pot_a: (3, 14)}, counters={(4, 2): DISH}),
            snap(lay, ((6, 5), "N", None), ((2, 1), "N", None),
                 pots={pot_b: (3, 10)}, counters={(4, 4): DISH}),
        ],
    ))
    # AMR: partner flails randomly; carry the team
    s.append(scenario(
        "bottleneck", "amr-partner-random", "AMR", "scripted:random_after:0",
        SuccessPredicate("delivered_within", 100), 100,
        [
            snap(lay, ((3, 2), "N", None), ((6, 5), "N", None),
                 pots={pot_b: (2, None)}, counters={(4, 1): ONION}),
            snap(lay, ((2, 2), "N", None), ((5, 5), "N", None), pots={pot_a: (2, None)}),
        ],
    ))
    return s


def build_room():
    lay = bundled_layout("room")
    pot = (8, 3)
    s = []
    s.append(scenario(
        "room", "sr-counter-soup", "SR", "scripted:stationary",
        SuccessPredicate("delivered_within", 50), 50,
        [
            snap(lay, ((6, 2), "N", None), ((1, 5), "S", None), counters={(8, 2): SOUP}),
            snap(lay, ((2, 4), "N", None), ((7, 1), "N", None), counters={(0, 4): SOUP}),
        ],
    ))
    s.append(scenario(
        "room", "sr-needed-object", "SR", "scripted:stationary",
        SuccessPredicate("holds_object_within", 20, object=ONION), 30,
        [
            snap(lay, ((6, 2), "N", None), ((5, 5), "N", DISH),
                 pots={pot: (2, None)}, counters={(8, 2): ONION}),
            snap(lay, ((2, 1), "N", None), ((5, 5), "N", DISH),
                 pots={pot: (2, None)}, counters={(0, 2): ONION}),
        ],
    ))
    s.append(scenario(
        "room", "sr-wrong-held-object", "SR", "scripted:stationary",
        SuccessPredicate("dropped_held_within", 20), 30,
        [
            snap(lay, ((2, 4), "N", DISH), ((7, 1), "N", None)),
            snap(lay, ((5, 2), "E", DISH), ((1, 1), "N", None)),
        ],
    ))
    s.append(scenario(
        "room", "sr-unusual-location", "SR", "scripted:stationary",
        SuccessPredicate("holds_object_within", 30, object=ONION), 40,
        [
            snap(lay, ((7, 5), "S", None), ((1, 1), "N", None)),
            snap(lay, ((1, 5), "W", None), ((7, 1), "N", None)),
        ],
    ))
    s.append(scenario(
        "room", "sr-counter-clutter", "SR", "scripted:stationary",
        SuccessPredicate("pot_contains_within", 45, cell=pot, onions=1), 45,
        [
            snap(lay, ((4, 3), "N", None), ((7, 5), "N", None),
                 counters={(1, 0): DISH, (8, 2): DISH, (0, 4): DISH, (5, 6): ONION, (0, 1): ONION}),
            snap(lay, ((3, 2), "N", None), ((1, 5), "N", None),
                 counters={(2, 0): ONION, (8, 4): DISH, (0, 2): DISH, (6, 6): ONION}),
        ],
    ))
    s.append(scenario(
        "room", "ar-dispenser-blocked", "AR", "scripted:blocker:onion",
        SuccessPredicate("holds_object_within", 30, object=ONION), 40,
        [
            snap(lay, ((4, 3), "N", None), ((4, 1), "N", None), counters={(8, 4): ONION}),
            snap(lay, ((3, 2), "N", None), ((4, 1), "N", None), counters={(0, 4): ONION}),
        ],
    ))
    s.append(scenario(
        "room", "ar-duplicate-object", "AR", "tom:mle_like",
        SuccessPredicate("dropped_held_within", 30), 40,
        [
            snap(lay, ((2, 5), "N", DISH), ((6, 3), "E", DISH), pots={pot: (3, 0)}),
            snap(lay, ((1, 2), "N", DISH), ((7, 4), "N", DISH), pots={pot: (3, 0)}),
        ],
    ))
    s.append(scenario(
        "room", "ar-blocking-path", "AR", "scripted:stubborn_deliverer",
        SuccessPredicate("cell_vacated_within", 10, cell=(4, 3)), 20,
        [
            snap(lay, ((4, 3), "S", None), ((4, 2), "S", SOUP)),
            snap(lay, ((4, 3), "N", None), ((4, 1), "S", SOUP)),
        ],
    ))
    s.append(scenario(
        "room", "amr-partner-afk", "AMR", "scripted:stationary_after:6",
        SuccessPredicate("delivered_within", 60), 60,
        [
            snap(lay, ((2, 2), "N", None), ((6, 4), "N", None), pots={pot: (3, 14)}),
            snap(lay, ((5, 4), "N", None), ((2, 1), "N", None), pots={pot: (3, 6)}),
        ],
    ))
    s.append(scenario(
        "room", "amr-partner-random", "AMR", "scripted:random_after:0",
        SuccessPredicate("delivered_within", 90), 90,
        [
            snap(lay, ((3, 3), "N", None), ((6, 5), "N", None),
                 pots={pot: (2, None)}, counters={(8, 2): ONION}),
            snap(lay, ((2, 3), "N", None), ((6, 1), "N", None), pots={pot: (2, None)}),
        ],
    ))
    return s


def build_center_objects():
    lay = bundled_layout("center_objects")
    pot = (2, 6)
    s = []
    s.append(scenario(
        "center_objects", "sr-counter-soup", "SR", "scripted:stationary",
        SuccessPredicate("delivered_within", 50), 50,
        [
            snap(lay, ((7, 4), "N", None), ((1, 1), "N", None), counters={(5, 3): SOUP}),
            snap(lay, ((1, 2), "N", None), ((7, 1), "N", None), counters={(0, 4): SOUP}),
        ],
    ))
    s.append(scenario(
        "center_objects", "sr-needed-object", "SR", "scripted:stationary",
        SuccessPredicate("holds_object_within", 20, object=ONION), 30,
        [
            snap(lay, ((1, 4), "N", None), ((6, 2), "N", DISH),
                 pots={pot: (2, None)}, counters={(2, 3): ONION}),
            snap(lay, ((5, 4), "N", None), ((6, 2), "N", DISH),
                 pots={pot: (2, None)}, counters={(5, 2): ONION}),
        ],
    ))
    s.append(scenario(
        "center_objects", "sr-wrong-held-object", "SR", "scripted:stationary",
        SuccessPredicate("dropped_held_within", 20), 30,
        [
            snap(lay, ((6, 4), "N", DISH), ((1, 1), "N", None)),
            snap(lay, ((2, 1), "E", DISH), ((7, 1), "N", None)),
        ],
    ))
    s.append(scenario(
        "center_objects", "sr-unusual-location", "SR", "scripted:stationary",
        SuccessPredicate("holds_object_within", 30, object=ONION), 40,
        [
            snap(lay, ((7, 2), "N", None), ((1, 1), "N", None)),
            snap(lay, ((6, 3), "S", None), ((1, 4), "N", None)),
        ],
    ))
    s.append(scenario(
        "center_objects", "sr-counter-clutter", "SR", "scripted:stationary",
        SuccessPredicate("pot_contains_within", 45, cell=pot, onions=1), 45,
        [
            snap(lay, ((4, 4), "N", None), ((7, 2), "N", None),
                 counters={(2, 2): DISH, (0, 3): DISH, (8, 4): DISH, (5, 2): ONION, (6, 0): ONION}),
            snap(lay, ((3, 1), "N", None), ((7, 4), "N", None),
                 counters={(2, 3): ONION, (0, 2): DISH, (8, 3): ONION, (4, 0): DISH}),
        ],
    ))
    s.append(scenario(
        "center_objects", "ar-dispenser-blocked", "AR", "scripted:blocker:onion",
        SuccessPredicate("holds_object_within", 30, object=ONION), 40,
        [
            snap(lay, ((2, 1), "E", None), ((4, 1), "N", None), counters={(6, 0): ONION}),
            snap(lay, ((3, 1), "E", None), ((4, 1), "N", None), counters={(8, 2): ONION}),
        ],
    ))
    s.append(scenario(
        "center_objects", "ar-duplicate-object", "AR", "tom:mle_like",
        SuccessPredicate("dropped_held_within", 30), 40,
        [
            snap(lay, ((7, 3), "N", DISH), ((2, 4), "S", DISH), pots={pot: (3, 0)}),
            snap(lay, ((6, 1), "N", DISH), ((1, 4), "S", DISH), pots={pot: (3, 0)}),
        ],
    ))
    s.append(scenario(
        "center_objects", "ar-blocking-path", "AR", "scripted:stubborn_deliverer",
        SuccessPredicate("cell_vacated_within", 10, cell=(3, 4)), 20,
        [
            snap(lay, ((3, 4), "S", None), ((2, 4), "E", SOUP)),
            snap(lay, ((3, 4), "N", None), ((2, 5), "E", SOUP)),
        ],
    ))
    s.append(scenario(
        "center_objects", "amr-partner-afk", "AMR", "scripted:stationary_after:6",
        SuccessPredicate("delivered_within", 60), 60,
        [
            snap(lay, ((1, 2), "N", None), ((6, 2), "N", None), pots={pot: (3, 14)}),
            snap(lay, ((4, 4), "N", None), ((7, 1), "N", None), pots={pot: (3, 8)}),
        ],
    ))
    s.append(scenario(
        "center_objects", "amr-partner-random", "AMR", "scripted:random_after:0",
        SuccessPredicate("delivered_within", 90), 90,
        [
            snap(lay, ((4, 4), "N", None), ((7, 2), "N", None),
                 pots={pot: (2, None)}, counters={(2, 3): ONION}),
            snap(lay, ((1, 3), "N", None), ((6, 1), "N", None), pots={pot: (2, None)}),
        ],
    ))
    return s


def build_center_pots():
    lay = bundled_layout("center_pots")
    pot_a, pot_b = (4, 2), (4, 3)
    s = []
    s.append(scenario(
        "center_pots", "sr-counter-soup", "SR", "scripted:stationary",
        SuccessPredicate("delivered_within", 60), 60,
        [
            snap(lay, ((2, 2), "E", None), ((7, 1), "N", None), counters={(3, 2): SOUP}),
            snap(lay, ((7, 2), "N", None), ((1, 1), "N", None), counters={(5, 3): SOUP}),
        ],
    ))
    s.append(scenario(
        "center_pots", "sr-needed-object", "SR", "scripted:stationary",
        SuccessPredicate("holds_object_within", 20, object=ONION), 30,
        [
            snap(lay, ((2, 4), "N", None), ((6, 1), "N", DISH),
                 pots={pot_a: (2, None)}, counters={(3, 3): ONION}),
            snap(lay, ((3, 1), "N", None), ((6, 1), "N", DISH),
                 pots={pot_a: (2, None)}, counters={(3, 2): ONION}),
        ],
    ))
    s.append(scenario(
        "center_pots", "sr-wrong-held-object", "SR", "scripted:stationary",
        SuccessPredicate("dropped_held_within", 20), 30,
        [
            snap(lay, ((5, 1), "N", DISH), ((1, 3), "N", None)),
            snap(lay, ((2, 4), "S", DISH), ((7, 1), "N", None)),
        ],
    ))
    s.append(scenario(
        "center_pots", "sr-unusual-location", "SR", "scripted:stationary",
        SuccessPredicate("holds_object_within", 30, object=ONION), 40,
        [
            snap(lay, ((6, 2), "N", None), ((1, 1), "N", None)),
            snap(lay, ((2, 3), "E", None), ((7, 1), "N", None)),
        ],
    ))
    s.append(scenario(
        "center_pots", "sr-counter-clutter", "SR", "scripted:stationary",
        SuccessPredicate("holds_object_within", 25, object=ONION), 40,
        [
            snap(lay, ((4, 1), "N", None), ((7, 1), "N", None),
                 counters={(3, 0): DISH, (8, 2): DISH, (5, 0): ONION, (0, 3): ONION, (3, 2): ONION}),
            snap(lay, ((2, 1), "N", None), ((7, 2), "N", None),
                 counters={(5, 2): ONION, (0, 2): DISH, (6, 0): ONION, (8, 3): DISH}),
        ],
    ))
    s.append(scenario(
        "center_pots", "ar-dispenser-blocked", "AR", "scripted:blocker:onion",
        SuccessPredicate("holds_object_within", 30, object=ONION), 40,
        [
            snap(lay, ((1, 3), "S", None), ((1, 4), "S", None), counters={(3, 2): ONION}),
            snap(lay, ((1, 2), "S", None), ((1, 4), "S", None), counters={(5, 2): ONION}),
        ],
    ))
    s.append(scenario(
        "center_pots", "ar-duplicate-object", "AR", "tom:mle_like",
        SuccessPredicate("dropped_held_within", 25), 40,
        [
            snap(lay, ((1, 1), "E", DISH), ((5, 1), "W", DISH), pots={pot_a: (3, 0)}),
            snap(lay, ((7, 3), "N", DISH), ((3, 4), "E", DISH), pots={pot_b: (3, 0)}),
        ],
    ))
    s.append(scenario(
        "center_pots", "ar-blocking-path", "AR", "scripted:stubborn_deliverer",
        SuccessPredicate("cell_vacated_within", 10, cell=(3, 4)), 20,
        [
            snap(lay, ((3, 4), "S", None), ((2, 4), "E", SOUP)),
            snap(lay, ((3, 4), "N", None), ((1, 4), "E", SOUP)),
        ],
    ))
    s.append(scenario(
        "center_pots", "amr-partner-afk", "AMR", "scripted:stationary_after:6",
        SuccessPredicate("delivered_within", 60), 60,
        [
            snap(lay, ((7, 1), "N", None), ((2, 2), "N", None), pots={pot_a: (3, 14)}),
            snap(lay, ((6, 4), "N", None), ((1, 2), "N", None), pots={pot_b: (3, 8)}),
        ],
    ))
    s.append(scenario(
        "center_pots", "amr-partner-random", "AMR", "scripted:random_after:0",
        SuccessPredicate("delivered_within", 90), 90,
        [
            snap(lay, ((2, 1), "N", None), ((7, 2), "N", None),
                 pots={pot_b: (2, None)}, counters={(3, 2): ONION}),
            snap(lay, ((6, 1), "N", None), ((1, 3), "N", None), pots={pot_a: (2, None)}),
        ],
    ))
    return s


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for old in OUT.glob("*.scenario"):
        old.unlink()
    scenarios = []
    for build in (build_bottleneck, build_room, build_center_objects, build_center_pots):
        scenarios.extend(build())
    for sc in scenarios:
        warnings = sc.validate()
        for w in warnings:
            print(f"  warning: {w}")
        (OUT / f"{sc.id}.scenario").write_text(sc.to_json())
    print(f"wrote {len(scenarios)} scenarios to {OUT}")


if __name__ == "__main__":
    main()
