"""Validation-reward evaluation against a partner population, discounted
returns, and diverse-starts state pools extracted from recorded play."""

from __future__ import annotations

import json
import math
import random
import statistics
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from coopkitchen import __version__
from coopkitchen.core import Layout, WorldState, deserialize_state, initial_state, serialize_state
from coopkitchen.core.state import check_state
from coopkitchen.policies import (
    Population,
    PolicyHandle,
    ReplayHandle,
    ToMHandle,
    Trajectory,
    describe_handle,
    run_rollout,
    stable_seed,
)


@dataclass(frozen=True)
class EvalConfig:
    episodes_per_member: int = 5
    horizon: int = 400
    gamma: float = 1.0
    seed: int = 0
    diverse_starts: bool = False

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")
        if self.episodes_per_member < 1 or self.horizon < 1:
            raise ValueError("episodes_per_member and horizon must be positive")


def episode_return(trajectory: Trajectory, gamma: float = 1.0) -> float:
    """Discounted sum of the recorded per-tick rewards."""
    if gamma == 1.0:
        return float(sum(trajectory.rewards))
    return sum(r * gamma**t for t, r in enumerate(trajectory.rewards))


def _validation_dir(layout_name: str):
    return resources.files("coopkitchen") / "data" / "validation" / layout_name


def default_validation_population(layout: Layout) -> Population:
    """The bundled 20-member population: 10 replayed recordings standing in
    for imitation-learned partners, plus the 10 diversified agent presets."""
    base = _validation_dir(layout.name)
    try:
        replay_files = sorted(p for p in base.iterdir() if p.name.endswith(".traj"))
    except (FileNotFoundError, NotADirectoryError):
        raise FileNotFoundError(
            f"no bundled validation trajectories for layout {layout.name!r}"
        ) from None
    members: list[PolicyHandle] = [ReplayHandle(path=str(p)) for p in replay_files]
    members.extend(ToMHandle(preset=f"v{i:02d}") for i in range(1, 11))
    return Population(members)


@dataclass
class MemberResult:
    member: str
    returns: list[float]

    @property
    def mean(self) -> float:
        return sum(self.returns) / len(self.returns)


@dataclass
class ValidationReport:
    tested: str
    layout_name: str
    config: EvalConfig
    members: list[MemberResult]
    wall_clock_seconds: Optional[float] = None  # excluded from the canonical file

    @property
    def all_returns(self) -> list[float]:
        return [r for m in self.members for r in m.returns]

    @property
    def mean(self) -> float:
        rs = self.all_returns
        return sum(rs) / len(rs)

    @property
    def std_error(self) -> float:
        rs = self.all_returns
        if len(rs) < 2:
            return float("nan")
        return statistics.stdev(rs) / math.sqrt(len(rs))

    def to_dict(self) -> dict:
        return {
            "version": __version__,
            "tested": self.tested,
            "layout": self.layout_name,
            "config": {
                "episodes_per_member": self.config.episodes_per_member,
                "horizon": self.config.horizon,
                "gamma": self.config.gamma,
                "seed": self.config.seed,
                "diverse_starts": self.config.diverse_starts,
            },
            "mean": self.mean,
            "std_error": self.std_error,
            "members": [
                {"member": m.member, "mean": m.mean, "returns": m.returns} for m in self.members
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def table(self) -> str:
        lines = [
            f"tested agent: {self.tested}    layout: {self.layout_name}    seed: {self.config.seed}",
            f"validation reward: {self.mean:.2f} +/- {self.std_error:.2f} "
            f"({len(self.members)} members x {self.config.episodes_per_member} episodes)",
            "",
            f"{'member':<40}{'mean':>8}",
        ]
        lines.extend(f"{m.member:<40}{m.mean:>8.2f}" for m in self.members)
        return "\n".join(lines) + "\n"


def validation_reward(
    layout: Layout,
    tested: PolicyHandle,
    population: Population,
    config: EvalConfig,
    start_pool: Optional["StartStatePool"] = None,
) -> ValidationReport:
    """Mean episode reward of `tested` (slot 0) across seeded episodes with
    each population member (slot 1)."""
    import time

    t0 = time.perf_counter()
    if config.diverse_starts and start_pool is None:
        raise ValueError("diverse_starts requires a start pool")
    members = []
    for m_idx, member in enumerate(population.members):
        returns = []
        for e in range(config.episodes_per_member):
            ep_seed = stable_seed(config.seed, m_idx, e)
            if config.diverse_starts:
                rng = random.Random(stable_seed(ep_seed, "start"))
                start = sample_start(start_pool, rng)
            else:
                start = initial_state(layout)
            policies = [tested.build(layout, 0, ep_seed), member.build(layout, 1, ep_seed)]
            rollout = run_rollout(layout, policies, config.horizon, start=start)
            returns.append(episode_return(rollout.trajectory, config.gamma))
        members.append(MemberResult(member=describe_handle(member), returns=returns))
    return ValidationReport(
        tested=describe_handle(tested),
        layout_name=layout.name,
        config=config,
        members=members,
        wall_clock_seconds=time.perf_counter() - t0,
    )


# --------------------------------------------------------------------------
# diverse starts


class LayoutMismatch(ValueError):
    pass


class EmptyPool(ValueError):
    pass


@dataclass
class StartStatePool:
    layout_name: str
    snapshots: list[WorldState]
    weights: Optional[list[float]] = None

    def __post_init__(self):
        if not self.snapshots:
            raise EmptyPool("start pool has no snapshots")
        if self.weights is not None and len(self.weights) != len(self.snapshots):
            raise ValueError("weights must match snapshots")

    def save(self, path) -> None:
        lines = [f"layout={self.layout_name}"]
        lines.extend(serialize_state(s) for s in self.snapshots)
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path, layout: Layout) -> "StartStatePool":
        lines = Path(path).read_text().splitlines()
        if not lines or not lines[0].startswith("layout="):
            raise ValueError(f"{path}: missing layout header")
        name = lines[0].partition("=")[2]
        if name != layout.name:
            raise LayoutMismatch(f"pool is for layout {name!r}, not {layout.name!r}")
        snapshots = [deserialize_state(line, layout) for line in lines[1:] if line.strip()]
        return cls(layout_name=name, snapshots=snapshots)


def build_start_pool(
    trajectories: Sequence[Trajectory], layout: Layout, stride: int = 10
) -> StartStatePool:
    """Extract every stride-th state of each trajectory (plus its initial
    state), reset ticks to 0, and validate them against the layout."""
    if stride < 1:
        raise ValueError("stride must be positive")
    from coopkitchen.core import Action, step

    snapshots: list[WorldState] = []
    for traj in trajectories:
        if traj.layout_name != layout.name:
            raise LayoutMismatch(
                f"trajectory is for layout {traj.layout_name!r}, not {layout.name!r}"
            )
        state = deserialize_state(traj.initial_state_text, layout)
        snapshots.append(replace(state, tick=0))
        for t, names in enumerate(traj.actions, start=1):
            state = step(layout, state, (Action(names[0]), Action(names[1]))).next_state
            if t % stride == 0:
                snapshot = replace(state, tick=0)
                check_state(layout, snapshot)
                snapshots.append(snapshot)
    if not snapshots:
        raise EmptyPool("no states extracted")
    return StartStatePool(layout_name=layout.name, snapshots=snapshots)


def sample_start(pool: StartStatePool, rng: random.Random) -> WorldState:
    """Uniform (or weighted) draw from the pool; deterministic given rng."""
    if pool.weights is None:
        return rng.choice(pool.snapshots)
    return rng.choices(pool.snapshots, weights=pool.weights, k=1)[0]
