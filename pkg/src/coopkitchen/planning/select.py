"""Softmax action selection over path costs."""

from __future__ import annotations

import math
import random
from typing import Mapping

from coopkitchen.core.state import ALL_ACTIONS, Action


class EmptyCosts(ValueError):
    """No action has a finite cost."""


def boltzmann_select(action_costs: Mapping[Action, float], beta: float, rng: random.Random) -> Action:
    """Sample an action with probability proportional to exp(-beta * cost).

    Only finite-cost actions participate; beta 0 is uniform over them and
    large beta concentrates on the cheapest action. Deterministic given the
    rng state.
    """
    if not math.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta}")
    finite = [(a, action_costs[a]) for a in ALL_ACTIONS if a in action_costs and math.isfinite(action_costs[a])]
    if not finite:
        raise EmptyCosts("all action costs are infinite")
    if beta == 0:
        weights = [1.0] * len(finite)
    else:
        low = min(c for _, c in finite)
        weights = [math.exp(-beta * (c - low)) for _, c in finite]
    return rng.choices([a for a, _ in finite], weights=weights, k=1)[0]
