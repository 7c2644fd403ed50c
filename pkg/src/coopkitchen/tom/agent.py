"""The theory-of-mind agent: strategic task choice plus noisy motion choice.

Per tick the pipeline runs, in order: a random-action gate, post-subtask
thinking, a pausing gate, stuck recovery, the strategic choice (keep or
re-plan the current subtask, optionally discounting the task the partner
appears to be doing), and the motion choice (optionally partner-aware
pathing, bump compliance, Boltzmann-rational action sampling). Noise gates
run first so each probability parameter is an exact marginal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Optional

from coopkitchen.core.layout import Cell, Layout
from coopkitchen.core.state import (
    ALL_ACTIONS,
    DIRECTION,
    DISH,
    MOVE_ACTIONS,
    ONION,
    SOUP,
    Action,
    History,
    WorldState,
)
from coopkitchen.planning import (
    Mode,
    MotionGoal,
    NoFeasibleAssignment,
    Task,
    TaskKind,
    allocate_tasks,
    boltzmann_select,
    enumerate_tasks,
    resolve_task,
)
from coopkitchen.planning.allocation import best_single_task
from coopkitchen.planning.paths import action_costs, plan_path
from coopkitchen.tom.params import ToMParams

STUCK_WINDOW = 3
PROGRESS_WINDOW = 8
THINK_TICKS = 2

PerceivedPartnerTask = Optional[Task]


@dataclass(frozen=True)
class ToMState:
    """Per-agent carry-over between ticks; everything else is recomputed."""

    current_task: Optional[Task] = None
    current_goal: Optional[MotionGoal] = None
    think_ticks_remaining: int = 0
    stuck_counter: int = 0
    last_blocked: bool = False
    interacted_at_goal: bool = False
    # no-progress detector: best action cost for the current goal and how
    # long it has failed to improve (blocked oscillations never freeze the
    # exact pose, so the plain stuck counter alone cannot see them)
    progress_cost: Optional[float] = None
    progress_age: int = 0


def infer_partner_task(layout: Layout, state: WorldState, partner: int) -> PerceivedPartnerTask:
    """The task the partner appears to be working on, if any.

    A held object maps to the task it serves; otherwise any pickable useful
    object in the partner's 180-degree field of view (the closed half-plane
    of its orientation) marks the matching fetch task.
    """
    open_tasks = enumerate_tasks(layout, state)
    p = state.players[partner]
    pots_rm = sorted(state.pots, key=lambda c: (c[1], c[0]))

    if p.held is not None:
        if p.held == SOUP:
            return Task(TaskKind.DELIVER_SOUP)
        if p.held == DISH:
            for pot in pots_rm:
                if state.pots[pot].cook_timer is not None:
                    return Task(TaskKind.LOAD_SOUP, pot=pot)
            return None
        if p.held == ONION:
            for pot in pots_rm:
                if state.pots[pot].cook_timer is None and state.pots[pot].onions < 3:
                    return Task(TaskKind.POT_ONION, pot=pot)
            return None
        return None

    open_kinds = {t.kind for t in open_tasks}
    obj_kind = {
        SOUP: TaskKind.DELIVER_SOUP,
        DISH: TaskKind.FETCH_DISH,
        ONION: TaskKind.FETCH_ONION,
    }
    ox, oy = p.orientation
    px, py = p.position
    best = None
    for cell, obj in state.counter_objects.items():
        if (cell[0] - px) * ox + (cell[1] - py) * oy < 0:
            continue  # behind the partner
        kind = obj_kind[obj]
        if kind not in open_kinds:
            continue
        dist = abs(cell[0] - px) + abs(cell[1] - py)
        key = (kind.value, dist, cell[1], cell[0])
        if best is None or key < best[0]:
            match = next(t for t in open_tasks if t.kind is kind)
            best = (key, match)
    return best[1] if best else None


def _cross_off(tasks: list[Task], attributed: Task) -> list[Task]:
    for i, t in enumerate(tasks):
        if t == attributed:
            return tasks[:i] + tasks[i + 1 :]
    for i, t in enumerate(tasks):
        if t.kind is attributed.kind:
            return tasks[:i] + tasks[i + 1 :]
    return tasks


def predict_partner_cells(layout: Layout, state: WorldState, partner: int) -> list[Cell]:
    """Partner's predicted cell per future tick under its inferred task."""
    pos = state.players[partner].position
    task = infer_partner_task(layout, state, partner)
    if task is None:
        return [pos]
    p = state.players[partner]
    chain = resolve_task(layout, state, task, (p.position, p.orientation), p.held)
    if chain is None or not chain.legs:
        return [pos]
    leg = chain.legs[0]
    plan = plan_path(layout, state, partner, leg.cell, leg.orientation)
    if plan is None:
        return [pos]
    cells = [pos]
    cell = pos
    for action in plan.path:
        d = DIRECTION[action]
        target = (cell[0] + d[0], cell[1] + d[1])
        if layout.is_floor(target):
            cell = target
        cells.append(cell)
    return cells


def _blocked_by_partner(layout: Layout, history: History, state: WorldState, agent: int) -> bool:
    """Did a partner collision cancel this agent's move on the previous tick?"""
    if not history.entries:
        return False
    prev_state, prev_actions = history.entries[-1]
    action = prev_actions[agent]
    if action not in MOVE_ACTIONS:
        return False
    me_prev = prev_state.players[agent]
    me_now = state.players[agent]
    if me_now.position != me_prev.position:
        return False
    d = DIRECTION[action]
    target = (me_prev.position[0] + d[0], me_prev.position[1] + d[1])
    # a cancelled move onto open floor can only have been partner-caused
    return layout.is_floor(target)


def _progress_stuck_counter(history: History, state: WorldState, agent: int, counter: int) -> int:
    if not history.entries:
        return 0
    prev_state, _ = history.entries[-1]
    a, b = prev_state.players[agent], state.players[agent]
    if (a.position, a.orientation, a.held) == (b.position, b.orientation, b.held):
        return counter + 1
    return 0


def _choose_task(
    params: ToMParams,
    layout: Layout,
    state: WorldState,
    agent: int,
    rng: random.Random,
) -> Optional[Task]:
    tasks = list(enumerate_tasks(layout, state))
    if rng.random() < params.prob_obs:
        attributed = infer_partner_task(layout, state, 1 - agent)
        if attributed is not None:
            revised = _cross_off(tasks, attributed)
            # when the partner's task is the only one left, helping beats idling
            if revised:
                tasks = revised
    if not tasks:
        return None
    if rng.random() < params.prob_greedy:
        try:
            alloc = allocate_tasks(layout, state, tasks, Mode.GREEDY, acting_agent=agent)
        except NoFeasibleAssignment:
            return None
        return alloc.agent_tasks[agent][0]
    window = tasks[: params.lookahead_horizon]
    try:
        alloc = allocate_tasks(layout, state, window, Mode.JOINT, acting_agent=agent)
    except NoFeasibleAssignment:
        return None
    mine = alloc.agent_tasks[agent]
    if mine:
        return mine[0]
    # the joint optimum leaves this agent idle: take its best task anyway
    found = best_single_task(layout, state, agent, window)
    return found[1].task if found else None


def tom_act(
    params: ToMParams,
    tom_state: ToMState,
    history: History,
    layout: Layout,
    state: WorldState,
    agent: int,
    rng: random.Random,
) -> tuple[Action, ToMState]:
    """One action for `agent`, plus the carried state for the next tick."""
    me = state.players[agent]
    s = replace(
        tom_state,
        stuck_counter=_progress_stuck_counter(history, state, agent, tom_state.stuck_counter),
        last_blocked=_blocked_by_partner(layout, history, state, agent),
    )

    # (1) pure noise
    if rng.random() < params.prob_random_action:
        return rng.choice(ALL_ACTIONS), s

    # (2) thinking after a completed subtask
    if s.think_ticks_remaining > 0:
        return Action.STAY, replace(s, think_ticks_remaining=s.think_ticks_remaining - 1)

    # (3) pausing
    if rng.random() < params.prob_pausing:
        return Action.STAY, s

    # (4) stuck recovery
    if s.current_task is not None and s.stuck_counter >= STUCK_WINDOW:
        return rng.choice(ALL_ACTIONS), replace(s, interacted_at_goal=False)

    # (5) strategic choice
    completed = s.interacted_at_goal
    if completed:
        s = replace(s, interacted_at_goal=False, current_task=None, current_goal=None)
        if rng.random() < params.thinking_prob:
            s = replace(s, think_ticks_remaining=THINK_TICKS)

    task = s.current_task
    if task is None or not (rng.random() < params.retain_goals):
        task = _choose_task(params, layout, state, agent, rng)
    if task is None:
        return Action.STAY, replace(s, current_task=None, current_goal=None)

    chain = resolve_task(layout, state, task, (me.position, me.orientation), me.held)
    if chain is None:
        # the kept task became impossible; re-plan once from scratch
        task = _choose_task(params, layout, state, agent, rng)
        if task is not None:
            chain = resolve_task(layout, state, task, (me.position, me.orientation), me.held)
        if task is None or chain is None:
            return Action.STAY, replace(s, current_task=None, current_goal=None)
    goal = chain.legs[0]
    s = replace(s, current_task=task, current_goal=goal)

    # (6) motion choice
    partner_aware = rng.random() < params.path_teamwork
    partner_parked = None
    partner_cells = None
    if partner_aware:
        partner_cells = predict_partner_cells(layout, state, 1 - agent)
        goal = _aware_goal(layout, state, agent, chain, partner_cells)
        partner_parked = partner_cells[-1]
        s = replace(s, current_goal=goal)

    costs = action_costs(
        layout, state, agent, goal.cell, goal.orientation, partner_aware, partner_parked
    )

    s = _age_progress(s, tom_state.current_task, task, costs)
    if s.progress_age >= PROGRESS_WINDOW:
        # blocked without improvement for a while: same response as stuck
        return rng.choice(ALL_ACTIONS), replace(s, progress_age=0, progress_cost=None)

    if s.last_blocked and rng.random() < params.compliance:
        if partner_cells is None:
            partner_cells = predict_partner_cells(layout, state, 1 - agent)
        avoiding = _avoiding_action(layout, state, agent, costs, partner_cells)
        if avoiding is not None:
            return avoiding, replace(s, interacted_at_goal=False)

    action = boltzmann_select(costs, params.rationality_coefficient, rng)
    at_goal = me.position == goal.cell and me.orientation == goal.orientation
    return action, replace(s, interacted_at_goal=(action is Action.INTERACT and at_goal))


def _age_progress(s: ToMState, prev_task: Optional[Task], task: Task, costs) -> ToMState:
    best = min(costs.values())
    if best <= 1.0 or best == float("inf"):
        # at the goal (waiting to interact) or nothing comparable to track
        return replace(s, progress_cost=None, progress_age=0)
    if prev_task != task or s.progress_cost is None or best < s.progress_cost:
        return replace(s, progress_cost=best, progress_age=0)
    return replace(s, progress_age=s.progress_age + 1)


def _aware_goal(layout, state, agent, chain, partner_cells):
    """Re-target the first leg so it is reachable around the predicted partner.

    Candidate goals for the leg are tried in partner-unaware cost order; the
    first one with a partner-aware plan wins. If none is aware-reachable the
    unaware choice stands (collisions and stuck recovery take over).
    """
    goal = chain.legs[0]
    plan = plan_path(
        layout, state, agent, goal.cell, goal.orientation, partner_aware=True, partner_cells=partner_cells
    )
    if plan is not None:
        return goal
    for alt in chain.first_leg_alternatives:
        if alt == goal:
            continue
        plan = plan_path(
            layout, state, agent, alt.cell, alt.orientation, partner_aware=True, partner_cells=partner_cells
        )
        if plan is not None:
            return alt
    return goal


def _avoiding_action(layout, state, agent, costs, partner_cells) -> Optional[Action]:
    """A move into a free adjacent cell off the planned path; ties row-major.

    Cells on the partner's predicted route are a last resort, so yielding
    actually clears the way instead of re-blocking it one cell over.
    """
    me = state.players[agent]
    partner_pos = state.players[1 - agent].position
    partner_route = set(partner_cells or ())
    finite_moves = {a: c for a, c in costs.items() if a in MOVE_ACTIONS and c != float("inf")}
    on_path = min(finite_moves, key=finite_moves.get) if finite_moves else None
    candidates = []
    for action in MOVE_ACTIONS:
        if action is on_path:
            continue
        d = DIRECTION[action]
        target = (me.position[0] + d[0], me.position[1] + d[1])
        if layout.is_floor(target) and target != partner_pos:
            candidates.append((target in partner_route, target[1], target[0], action))
    if not candidates:
        return None
    return min(candidates)[3]
