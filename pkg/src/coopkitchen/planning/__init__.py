from coopkitchen.planning.paths import (
    PlanResult,
    action_costs,
    distance_field,
    plan_path,
)
from coopkitchen.planning.tasks import (
    Chain,
    MotionGoal,
    Task,
    TaskKind,
    enumerate_tasks,
    resolve_task,
)
from coopkitchen.planning.allocation import Allocation, Mode, NoFeasibleAssignment, allocate_tasks
from coopkitchen.planning.select import EmptyCosts, boltzmann_select

__all__ = [
    "Allocation",
    "Chain",
    "EmptyCosts",
    "Mode",
    "MotionGoal",
    "NoFeasibleAssignment",
    "PlanResult",
    "Task",
    "TaskKind",
    "action_costs",
    "allocate_tasks",
    "boltzmann_select",
    "distance_field",
    "enumerate_tasks",
    "plan_path",
    "resolve_task",
]
