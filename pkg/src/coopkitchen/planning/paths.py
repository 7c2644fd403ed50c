"""Single-agent motion planning over (cell, orientation) configurations.

A configuration changes by move actions only: stepping onto an adjacent
floor cell sets the orientation to the move direction, and a move into a
non-floor tile turns the player in place. Facing a direction whose target
cell is open floor is therefore only possible by arriving with that move.
Every action costs one tick.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from coopkitchen.core.layout import Cell, Layout
from coopkitchen.core.state import DIRECTION, MOVE_ACTIONS, ORIENTATIONS, Action, WorldState

Config = tuple[Cell, tuple[int, int]]

UNREACHABLE = float("inf")


@dataclass(frozen=True)
class PlanResult:
    path: tuple[Action, ...]
    cost: int


def _plan_horizon(layout: Layout) -> int:
    return 2 * layout.width * layout.height


@lru_cache(maxsize=16384)
def distance_field(
    layout: Layout,
    goal_cell: Cell,
    goal_orient: Optional[tuple[int, int]],
    blocked_cells: tuple[Cell, ...] = (),
):
    """Ticks-to-goal for every configuration, by reverse breadth-first search.

    goal_orient None means any orientation at goal_cell counts. blocked_cells
    mark floor cells as unwalkable (a partner's body or predicted parking
    spot): moves cannot enter them but turning toward them still works,
    exactly like bumping a wall.
    """

    def walkable(cell: Cell) -> bool:
        return layout.is_floor(cell) and cell not in blocked_cells

    if goal_orient is None:
        frontier = [((goal_cell, o), 0) for o in ORIENTATIONS]
    else:
        frontier = [((goal_cell, goal_orient), 0)]
    frontier = [(cfg, d) for cfg, d in frontier if walkable(cfg[0])]
    dist: dict[Config, int] = {cfg: 0 for cfg, _ in frontier}
    queue = deque(frontier)
    while queue:
        (cell, orient), d = queue.popleft()
        nd = d + 1
        # predecessors that moved into `cell` along `orient`
        back = (cell[0] - orient[0], cell[1] - orient[1])
        if walkable(back):
            for o in ORIENTATIONS:
                cfg = (back, o)
                if cfg not in dist:
                    dist[cfg] = nd
                    queue.append((cfg, nd))
        # predecessors that turned in place toward `orient` (only possible
        # when the faced tile is not walkable)
        ahead = (cell[0] + orient[0], cell[1] + orient[1])
        if not walkable(ahead):
            for o in ORIENTATIONS:
                if o != orient:
                    cfg = (cell, o)
                    if cfg not in dist:
                        dist[cfg] = nd
                        queue.append((cfg, nd))
    return dist


def config_distance(layout: Layout, start: Config, goal_cell: Cell, goal_orient=None) -> float:
    return distance_field(layout, goal_cell, goal_orient).get(start, UNREACHABLE)


def _move_successor(layout: Layout, config: Config, action: Action) -> Config:
    cell, _ = config
    d = DIRECTION[action]
    target = (cell[0] + d[0], cell[1] + d[1])
    if layout.is_floor(target):
        return (target, d)
    return (cell, d)


def _reconstruct(layout: Layout, start: Config, field: dict, horizon: int) -> Optional[tuple[Action, ...]]:
    path: list[Action] = []
    config = start
    remaining = field.get(config)
    if remaining is None:
        return None
    while remaining > 0:
        if len(path) > horizon:
            return None
        for action in MOVE_ACTIONS:
            succ = _move_successor(layout, config, action)
            if field.get(succ, UNREACHABLE) == remaining - 1:
                path.append(action)
                config = succ
                remaining -= 1
                break
        else:
            return None
    return tuple(path)


def plan_path(
    layout: Layout,
    state: WorldState,
    agent: int,
    goal_cell: Cell,
    goal_orient: Optional[tuple[int, int]] = None,
    partner_aware: bool = False,
    partner_cells: Optional[Sequence[Cell]] = None,
) -> Optional[PlanResult]:
    """Shortest action sequence bringing `agent` to the goal configuration.

    Partner-unaware planning ignores the partner entirely (it may plan
    through them, relying on collision no-ops). Partner-aware planning
    treats `partner_cells` as the partner's predicted cell per future tick
    (defaulting to it standing still) and returns a path that never moves
    into the partner's predicted current or next cell.

    Returns None when the goal cannot be reached within 2 * width * height
    ticks.
    """
    player = state.players[agent]
    start: Config = (player.position, player.orientation)
    horizon = _plan_horizon(layout)
    if not partner_aware:
        field = distance_field(layout, goal_cell, goal_orient)
        cost = field.get(start)
        if cost is None or cost > horizon:
            return None
        path = _reconstruct(layout, start, field, horizon)
        if path is None:
            return None
        return PlanResult(path=path, cost=cost)

    if partner_cells is None or len(partner_cells) == 0:
        partner_cells = [state.players[1 - agent].position]
    return _plan_aware(layout, start, goal_cell, goal_orient, tuple(partner_cells), horizon)


def _plan_aware(
    layout: Layout,
    start: Config,
    goal_cell: Cell,
    goal_orient,
    partner_cells: tuple[Cell, ...],
    horizon: int,
) -> Optional[PlanResult]:
    # Time-expanded search: the time coordinate is capped once the partner's
    # predicted path is exhausted (it parks on its final cell), after which
    # the world is static and plain BFS over configurations remains.
    cap = len(partner_cells) - 1

    def partner_at(t: int) -> Cell:
        return partner_cells[min(t, cap)]

    def is_goal(cell, orient) -> bool:
        return cell == goal_cell and (goal_orient is None or orient == goal_orient)

    if is_goal(*start):
        return PlanResult(path=(), cost=0)

    start_node = (start[0], start[1], 0)
    parents: dict = {start_node: None}
    queue = deque([(start_node, 0)])
    while queue:
        node, depth = queue.popleft()
        if depth >= horizon:
            continue
        cell, orient, t = node
        p_now = partner_at(t)
        p_next = partner_at(t + 1)
        t_next = min(t + 1, cap)
        for action in (*MOVE_ACTIONS, Action.STAY):
            if action is Action.STAY:
                succ_cfg = (cell, orient)
            else:
                d = DIRECTION[action]
                target = (cell[0] + d[0], cell[1] + d[1])
                blocked = (
                    not layout.is_floor(target)
                    or target == p_now
                    or target == p_next
                )
                succ_cfg = (cell, d) if blocked else (target, d)
            succ = (succ_cfg[0], succ_cfg[1], t_next)
            if succ in parents:
                continue
            parents[succ] = (node, action)
            if is_goal(*succ_cfg):
                actions: list[Action] = [action]
                cur = node
                while parents[cur] is not None:
                    cur, act = parents[cur]
                    actions.append(act)
                actions.reverse()
                return PlanResult(path=tuple(actions), cost=len(actions))
            queue.append((succ, depth + 1))
    return None


def action_costs(
    layout: Layout,
    state: WorldState,
    agent: int,
    goal_cell: Cell,
    goal_orient,
    partner_aware: bool = False,
    partner_parked: Optional[Cell] = None,
) -> dict[Action, float]:
    """Cost of each action as 1 + work remaining afterwards.

    Remaining work counts the moves still needed to reach the goal
    configuration plus the final interact, so the action completing the
    goal costs 1 and on-path moves are strictly cheaper than detours.

    With partner_aware, a move into the partner's current cell is priced as
    the turn-in-place it actually produces, and remaining work is measured
    around the partner's predicted parking cell. Conflicting moves then tie
    with waiting instead of dominating it, so the Boltzmann draw breaks
    stand-offs stochastically. Falls back to ignoring the partner when it
    parks across the only route.
    """
    player = state.players[agent]
    partner_pos = state.players[1 - agent].position
    start: Config = (player.position, player.orientation)

    field = None
    if partner_aware:
        cells = {partner_pos}
        if partner_parked is not None:
            cells.add(partner_parked)
        cells.discard(goal_cell)
        cells.discard(player.position)
        if cells:
            blocked = distance_field(layout, goal_cell, goal_orient, tuple(sorted(cells)))
            if blocked.get(start) is not None:
                field = blocked
    if field is None:
        field = distance_field(layout, goal_cell, goal_orient)

    def remaining(cfg: Config) -> float:
        d = field.get(cfg)
        return UNREACHABLE if d is None else d + 1  # + final interact

    def successor(action: Action) -> Config:
        cell, _ = start
        d = DIRECTION[action]
        target = (cell[0] + d[0], cell[1] + d[1])
        if layout.is_floor(target) and not (partner_aware and target == partner_pos):
            return (target, d)
        return (cell, d)

    at_goal = player.position == goal_cell and (
        goal_orient is None or player.orientation == goal_orient
    )
    costs: dict[Action, float] = {}
    for action in MOVE_ACTIONS:
        costs[action] = 1 + remaining(successor(action))
    costs[Action.STAY] = 1 + remaining(start)
    costs[Action.INTERACT] = 1.0 if at_goal else 1 + remaining(start)
    return costs
