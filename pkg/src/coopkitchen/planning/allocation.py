"""Task-to-agent assignment: greedy single pick or joint makespan search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from coopkitchen.core.layout import Layout
from coopkitchen.core.state import WorldState
from coopkitchen.planning.tasks import Chain, Task, resolve_task


class Mode(Enum):
    GREEDY = "greedy"
    JOINT = "joint"


class NoFeasibleAssignment(RuntimeError):
    """Every assignment of the task window contains an unreachable leg."""


@dataclass(frozen=True)
class Allocation:
    assignment: tuple[int, ...]  # doer agent index per task, aligned with `tasks`
    tasks: tuple[Task, ...]
    agent_tasks: tuple[tuple[Task, ...], tuple[Task, ...]]
    cost: float


def _agent_start(state: WorldState, agent: int):
    p = state.players[agent]
    return (p.position, p.orientation), p.held


def _sequence_cost(layout: Layout, state: WorldState, agent: int, tasks: Sequence[Task]) -> Optional[float]:
    """Total ticks for `agent` to run `tasks` in order; None if any leg fails."""
    config, held = _agent_start(state, agent)
    total = 0.0
    for task in tasks:
        chain = resolve_task(layout, state, task, config, held)
        if chain is None:
            return None
        total += chain.cost
        config, held = chain.end_config, chain.end_held
    return total


def best_single_task(layout: Layout, state: WorldState, agent: int, tasks: Sequence[Task]) -> Optional[tuple[int, Chain]]:
    """The acting agent's single best task: highest priority, then lowest cost."""
    config, held = _agent_start(state, agent)
    best = None
    for idx, task in enumerate(tasks):
        chain = resolve_task(layout, state, task, config, held)
        if chain is None:
            continue
        key = (task.priority, chain.cost, idx)
        if best is None or key < best[0]:
            best = (key, idx, chain)
    if best is None:
        return None
    return best[1], best[2]


def allocate_tasks(
    layout: Layout,
    state: WorldState,
    tasks: Sequence[Task],
    mode: Mode,
    acting_agent: int = 0,
) -> Allocation:
    """Assign a window of open tasks to the two agents.

    GREEDY assigns only the acting agent its best task. JOINT enumerates all
    2^N splits of the window (each agent runs its share in priority order),
    scores each split by makespan (the slower agent's sequential ticks), and
    returns the cheapest; ties break on the lexicographically smallest
    assignment vector. Tasks no agent can execute are dropped from the
    window rather than poisoning every split.
    """
    tasks = list(tasks)
    if mode is Mode.GREEDY:
        found = best_single_task(layout, state, acting_agent, tasks)
        if found is None:
            raise NoFeasibleAssignment("no task is feasible for the acting agent")
        idx, chain = found
        mine = (chain.task,)
        lists = (mine, ()) if acting_agent == 0 else ((), mine)
        return Allocation(
            assignment=(acting_agent,),
            tasks=(chain.task,),
            agent_tasks=lists,
            cost=chain.cost,
        )

    doable = []
    for task in tasks:
        if any(
            resolve_task(layout, state, task, *_agent_start(state, a)) is not None
            for a in (0, 1)
        ):
            doable.append(task)
    if not doable:
        raise NoFeasibleAssignment("no task in the window is feasible for either agent")

    best: Optional[tuple[float, tuple[int, ...], tuple, float]] = None
    for assignment in itertools.product((0, 1), repeat=len(doable)):
        lists = (
            tuple(t for t, a in zip(doable, assignment) if a == 0),
            tuple(t for t, a in zip(doable, assignment) if a == 1),
        )
        costs = []
        feasible = True
        for agent in (0, 1):
            c = _sequence_cost(layout, state, agent, lists[agent])
            if c is None:
                feasible = False
                break
            costs.append(c)
        if not feasible:
            continue
        makespan = max(costs)
        key = (makespan, assignment)
        if best is None or key < (best[0], best[1]):
            best = (makespan, assignment, lists, makespan)
    if best is None:
        raise NoFeasibleAssignment("every split contains an unreachable task sequence")
    makespan, assignment, lists, _ = best
    return Allocation(assignment=assignment, tasks=tuple(doable), agent_tasks=lists, cost=makespan)
