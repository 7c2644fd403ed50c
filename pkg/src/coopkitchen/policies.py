"""Partner policies: scripted kinds, trajectory replay, the theory-of-mind
agent behind the common interface, and a subprocess bridge for external
agents.

A PolicyHandle is a picklable spec; build() instantiates a fresh policy for
one episode. Seeding is deterministic: the effective seed mixes the handle
seed, the episode seed, and the player slot, so identical (handle, episode
seed) pairs reproduce identical rollouts.
"""

from __future__ import annotations

import hashlib
import json
import os
import queue
import random
import shlex
import subprocess
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from coopkitchen.core import (
    Action,
    History,
    Layout,
    WorldState,
    deserialize_state,
    initial_state,
    serialize_state,
    step,
)
from coopkitchen.core.state import ALL_ACTIONS
from coopkitchen.planning.paths import plan_path
from coopkitchen.tom import ToMParams, ToMState, load_params_file, preset_params, tom_act
from coopkitchen.tom.params import mle_like_params


def stable_seed(*parts) -> int:
    """Platform-stable 63-bit seed derived from the string forms of parts."""
    text = "|".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


class PolicyError(RuntimeError):
    """A policy failed to produce an action."""


class ExternalTimeout(PolicyError):
    pass


class ExternalProtocolError(PolicyError):
    pass


class ReplayLayoutMismatch(PolicyError):
    pass


class Policy:
    """One episode's worth of acting for one player slot."""

    def act(self, history: History, state: WorldState) -> Action:
        raise NotImplementedError

    def close(self, total_reward: int = 0) -> None:
        pass


class StationaryPolicy(Policy):
    def act(self, history, state):
        return Action.STAY


class UniformRandomPolicy(Policy):
    def __init__(self, rng: random.Random):
        self.rng = rng

    def act(self, history, state):
        return self.rng.choice(ALL_ACTIONS)


class ToMPolicy(Policy):
    def __init__(self, params: ToMParams, layout: Layout, agent_index: int, rng: random.Random):
        self.params = params
        self.layout = layout
        self.agent_index = agent_index
        self.rng = rng
        self.tom_state = ToMState()

    def act(self, history, state):
        action, self.tom_state = tom_act(
            self.params, self.tom_state, history, self.layout, state, self.agent_index, self.rng
        )
        return action


class SwitchAfterPolicy(Policy):
    """Plays `before` until tick t, then switches to `after` forever."""

    def __init__(self, before: Policy, after: Policy, t: int):
        self.before = before
        self.after = after
        self.t = t

    def act(self, history, state):
        if state.tick < self.t:
            return self.before.act(history, state)
        return self.after.act(history, state)


class StubbornDelivererPolicy(Policy):
    """Marches its held soup along the shortest delivery path and never yields."""

    def __init__(self, layout: Layout, agent_index: int):
        self.layout = layout
        self.agent_index = agent_index

    def act(self, history, state):
        me = state.players[self.agent_index]
        if me.held != "soup":
            return Action.STAY
        best = None
        for serve in self.layout.serving_cells:
            for stand in self.layout.floor_neighbors(serve):
                orient = (serve[0] - stand[0], serve[1] - stand[1])
                plan = plan_path(self.layout, state, self.agent_index, stand, orient)
                if plan is None:
                    continue
                key = (plan.cost, stand[1], stand[0])
                if best is None or key < best[0]:
                    best = (key, plan)
        if best is None:
            return Action.STAY
        plan = best[1]
        if not plan.path:
            return Action.INTERACT
        return plan.path[0]


class DispenserBlockerPolicy(Policy):
    """Walks to the access cell of the named dispenser kind and parks there."""

    def __init__(self, layout: Layout, agent_index: int, tile_kind: str):
        self.layout = layout
        self.agent_index = agent_index
        sources = layout.onion_sources if tile_kind == "onion" else layout.dish_sources
        if not sources:
            raise PolicyError(f"layout has no {tile_kind} dispenser to block")
        dispenser = sorted(sources, key=lambda c: (c[1], c[0]))[0]
        stands = layout.floor_neighbors(dispenser)
        if not stands:
            raise PolicyError(f"dispenser at {dispenser} has no access cell")
        self.target = sorted(stands, key=lambda c: (c[1], c[0]))[0]

    def act(self, history, state):
        me = state.players[self.agent_index]
        if me.position == self.target:
            return Action.STAY
        plan = plan_path(self.layout, state, self.agent_index, self.target)
        if plan is None or not plan.path:
            return Action.STAY
        return plan.path[0]


@dataclass
class Trajectory:
    layout_name: str
    initial_state_text: str
    actions: list[tuple[str, str]]  # wire action names per tick
    rewards: list[int]
    final_state_text: Optional[str] = None
    metadata: dict = field(default_factory=dict)

    @property
    def total_reward(self) -> int:
        return sum(self.rewards)

    def to_json(self) -> str:
        return json.dumps(
            {
                "layout": self.layout_name,
                "initial_state": self.initial_state_text,
                "actions": [list(a) for a in self.actions],
                "rewards": self.rewards,
                "final_state": self.final_state_text,
                "metadata": self.metadata,
            },
            sort_keys=True,
            indent=2,
        ) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Trajectory":
        data = json.loads(text)
        return cls(
            layout_name=data["layout"],
            initial_state_text=data["initial_state"],
            actions=[tuple(a) for a in data["actions"]],
            rewards=list(data["rewards"]),
            final_state_text=data.get("final_state"),
            metadata=dict(data.get("metadata", {})),
        )

    def save(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path) -> "Trajectory":
        return cls.from_json(Path(path).read_text())


class VerifyMismatch(ValueError):
    def __init__(self, tick: int, detail: str):
        super().__init__(f"trajectory diverges at tick {tick}: {detail}")
        self.tick = tick


def verify_trajectory(traj: Trajectory, layout: Layout) -> None:
    """Re-step the recorded actions; compare rewards per tick and the final state."""
    state = deserialize_state(traj.initial_state_text, layout)
    for t, (names, reward) in enumerate(zip(traj.actions, traj.rewards)):
        actions = (Action(names[0]), Action(names[1]))
        outcome = step(layout, state, actions)
        if outcome.reward != reward:
            raise VerifyMismatch(t, f"reward {outcome.reward} != recorded {reward}")
        state = outcome.next_state
    if traj.final_state_text is not None and serialize_state(state) != traj.final_state_text:
        raise VerifyMismatch(len(traj.actions), "replayed final state differs from recorded")


class ReplayPolicy(Policy):
    """Plays back one side of a recorded trajectory; Stay once it runs out."""

    def __init__(self, trajectory: Trajectory, layout: Layout, agent_index: int):
        if trajectory.layout_name != layout.name:
            raise ReplayLayoutMismatch(
                f"trajectory is for {trajectory.layout_name!r}, not {layout.name!r}"
            )
        self.actions = trajectory.actions
        self.agent_index = agent_index

    def act(self, history, state):
        if state.tick >= len(self.actions):
            return Action.STAY
        return Action(self.actions[state.tick][self.agent_index])


class ExternalPolicy(Policy):
    """Line-delimited JSON bridge to an agent subprocess.

    Handshake: {type: hello, layout, agent_index} -> {type: ready}. Per
    tick: {type: obs, tick, state, last_joint_action} -> {type: act,
    action}. On close: {type: end, reward}. The child receives the
    episode's effective seed in COOPKITCHEN_SEED.
    """

    def __init__(self, command: str, layout: Layout, agent_index: int, seed: int, timeout_ms: int = 1000):
        self.timeout_s = timeout_ms / 1000
        self.agent_index = agent_index
        env = dict(os.environ, COOPKITCHEN_SEED=str(seed))
        try:
            self.proc = subprocess.Popen(
                shlex.split(command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
                env=env,
            )
        except OSError as exc:
            raise PolicyError(f"cannot spawn external agent {command!r}: {exc}") from None
        self._lines: queue.Queue = queue.Queue()
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()
        self._send(
            {
                "type": "hello",
                "layout": {"name": layout.name, "grid": layout.as_text().split("\n")},
                "agent_index": agent_index,
            }
        )
        ready = self._recv()
        if ready.get("type") != "ready":
            raise ExternalProtocolError(f"expected ready, got {ready!r}")

    def _pump(self):
        for line in self.proc.stdout:
            self._lines.put(line)
        self._lines.put(None)

    def _send(self, record: dict) -> None:
        if self.proc.poll() is not None:
            raise ExternalProtocolError("external agent exited early")
        try:
            self.proc.stdin.write(json.dumps(record) + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, ValueError) as exc:
            raise ExternalProtocolError(f"external agent pipe closed: {exc}") from None

    def _recv(self) -> dict:
        try:
            line = self._lines.get(timeout=self.timeout_s)
        except queue.Empty:
            raise ExternalTimeout(f"no reply within {self.timeout_s * 1000:.0f} ms") from None
        if line is None:
            raise ExternalProtocolError("external agent closed its stdout")
        try:
            record = json.loads(line)
        except json.JSONDecodeError:
            raise ExternalProtocolError(f"bad record from agent: {line!r}") from None
        if not isinstance(record, dict):
            raise ExternalProtocolError(f"bad record from agent: {line!r}")
        return record

    def act(self, history, state):
        last = None
        if history.entries:
            _, actions = history.entries[-1]
            last = [a.value for a in actions]
        self._send(
            {
                "type": "obs",
                "tick": state.tick,
                "state": serialize_state(state),
                "last_joint_action": last,
            }
        )
        reply = self._recv()
        if reply.get("type") != "act" or reply.get("action") not in Action._value2member_map_:
            raise ExternalProtocolError(f"expected act record, got {reply!r}")
        return Action(reply["action"])

    def close(self, total_reward: int = 0) -> None:
        try:
            self._send({"type": "end", "reward": total_reward})
        except PolicyError:
            pass
        try:
            self.proc.stdin.close()
        except OSError:
            pass
        try:
            self.proc.wait(timeout=2)
        except subprocess.TimeoutExpired:
            self.proc.kill()


# --------------------------------------------------------------------------
# handles: picklable specs that build policies per episode


@dataclass(frozen=True)
class ToMHandle:
    preset: Optional[str] = None  # preset name, or "mle_like" resolved per layout
    params: Optional[ToMParams] = None
    params_path: Optional[str] = None
    seed: int = 0

    def resolve_params(self, layout: Layout) -> ToMParams:
        if self.params is not None:
            return self.params
        if self.params_path is not None:
            return load_params_file(self.params_path)
        name = self.preset or "mle_like"
        if name == "mle_like":
            return mle_like_params(layout.name)
        return preset_params(name)

    def build(self, layout: Layout, agent_index: int, episode_seed: int) -> Policy:
        rng = random.Random(stable_seed(self.seed, episode_seed, agent_index))
        return ToMPolicy(self.resolve_params(layout), layout, agent_index, rng)

    def describe(self) -> str:
        if self.params_path:
            return f"tom:file:{self.params_path}"
        return f"tom:{self.preset or 'custom'}"


def _mle_or_default(layout: Layout) -> ToMParams:
    try:
        return mle_like_params(layout.name)
    except KeyError:
        return ToMParams()


@dataclass(frozen=True)
class ScriptedHandle:
    kind: str  # stationary | stationary_after | random | random_after | stubborn_deliverer | blocker
    t: int = 0
    tile: str = "onion"
    seed: int = 0

    def build(self, layout: Layout, agent_index: int, episode_seed: int) -> Policy:
        rng = random.Random(stable_seed(self.seed, episode_seed, agent_index))
        if self.kind == "stationary":
            return StationaryPolicy()
        if self.kind == "random":
            return UniformRandomPolicy(rng)
        if self.kind in ("stationary_after", "random_after"):
            before = ToMPolicy(_mle_or_default(layout), layout, agent_index, rng)
            after = (
                StationaryPolicy()
                if self.kind == "stationary_after"
                else UniformRandomPolicy(random.Random(stable_seed(self.seed, episode_seed, agent_index, "after")))
            )
            return SwitchAfterPolicy(before, after, self.t)
        if self.kind == "stubborn_deliverer":
            return StubbornDelivererPolicy(layout, agent_index)
        if self.kind == "blocker":
            return DispenserBlockerPolicy(layout, agent_index, self.tile)
        raise ValueError(f"unknown scripted kind {self.kind!r}")

    def describe(self) -> str:
        if self.kind in ("stationary_after", "random_after"):
            return f"scripted:{self.kind}:{self.t}"
        if self.kind == "blocker":
            return f"scripted:blocker:{self.tile}"
        return f"scripted:{self.kind}"


@dataclass(frozen=True)
class ReplayHandle:
    path: str
    seed: int = 0

    def build(self, layout: Layout, agent_index: int, episode_seed: int) -> Policy:
        return ReplayPolicy(Trajectory.load(self.path), layout, agent_index)

    def describe(self) -> str:
        return f"replay:{self.path}"


@dataclass(frozen=True)
class ExternalHandle:
    command: str
    timeout_ms: int = 1000
    seed: int = 0

    def build(self, layout: Layout, agent_index: int, episode_seed: int) -> Policy:
        effective = stable_seed(self.seed, episode_seed, agent_index)
        return ExternalPolicy(self.command, layout, agent_index, effective, self.timeout_ms)

    def describe(self) -> str:
        return f"external:{self.command}"


PolicyHandle = ToMHandle | ScriptedHandle | ReplayHandle | ExternalHandle


def parse_agent_spec(spec: str) -> PolicyHandle:
    """Parse the `kind:argument` agent mini-language used by the CLI and
    scenario files.

    Examples: tom:max_capability, tom:mle_like, tom:v03, tom:file:my.params,
    scripted:stationary, scripted:stationary_after:40, scripted:random,
    scripted:random_after:25, scripted:stubborn_deliverer,
    scripted:blocker:onion, replay:runs/ep1.traj, external:./my_agent --flag
    """
    kind, _, rest = spec.partition(":")
    if kind == "tom":
        if rest.startswith("file:"):
            return ToMHandle(params_path=rest[len("file:") :])
        return ToMHandle(preset=rest or "mle_like")
    if kind == "scripted":
        sub, _, arg = rest.partition(":")
        if sub in ("stationary", "random", "stubborn_deliverer"):
            if sub in ("stationary", "random") and arg:
                raise ValueError(f"scripted:{sub} takes no argument")
            return ScriptedHandle(kind=sub)
        if sub in ("stationary_after", "random_after"):
            return ScriptedHandle(kind=sub, t=int(arg) if arg else 40)
        if sub == "blocker":
            tile = arg or "onion"
            if tile not in ("onion", "dish"):
                raise ValueError(f"blocker tile must be onion or dish, got {tile!r}")
            return ScriptedHandle(kind="blocker", tile=tile)
        raise ValueError(f"unknown scripted kind {sub!r}")
    if kind == "replay":
        if not rest:
            raise ValueError("replay spec needs a trajectory path")
        return ReplayHandle(path=rest)
    if kind == "external":
        if not rest:
            raise ValueError("external spec needs a command")
        return ExternalHandle(command=rest)
    raise ValueError(f"unknown agent spec {spec!r}")


def describe_handle(handle: PolicyHandle) -> str:
    return handle.describe()


# --------------------------------------------------------------------------
# rollouts


@dataclass
class Rollout:
    trajectory: Trajectory
    states: list[WorldState]
    events: list[tuple]
    total_reward: int


def run_rollout(
    layout: Layout,
    policies: Sequence[Policy],
    horizon: int,
    start: Optional[WorldState] = None,
    stop_when=None,
) -> Rollout:
    """Step both policies for `horizon` ticks (or until stop_when is true).

    stop_when receives (tick_index, StepOutcome, state_after) after each
    step; returning True ends the rollout early.
    """
    state = start if start is not None else initial_state(layout)
    states = [state]
    history = History()
    actions_log: list[tuple[str, str]] = []
    rewards: list[int] = []
    events: list[tuple] = []
    total = 0
    try:
        for t in range(horizon):
            actions = tuple(p.act(history, state) for p in policies)
            outcome = step(layout, state, actions)
            history.append(state, actions)
            actions_log.append(tuple(a.value for a in actions))
            rewards.append(outcome.reward)
            events.append(outcome.events)
            total += outcome.reward
            state = outcome.next_state
            states.append(state)
            if stop_when is not None and stop_when(t, outcome, state):
                break
    finally:
        for p in policies:
            p.close(total)
    traj = Trajectory(
        layout_name=layout.name,
        initial_state_text=serialize_state(states[0]),
        actions=actions_log,
        rewards=rewards,
        final_state_text=serialize_state(states[-1]),
    )
    return Rollout(trajectory=traj, states=states, events=events, total_reward=total)


def record_rollout(
    layout: Layout,
    handle0: PolicyHandle,
    handle1: PolicyHandle,
    horizon: int,
    seed: int,
    start: Optional[WorldState] = None,
) -> Trajectory:
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    policies = [h.build(layout, i, seed) for i, h in enumerate((handle0, handle1))]
    rollout = run_rollout(layout, policies, horizon, start=start)
    rollout.trajectory.metadata = {
        "seed": seed,
        "agents": [describe_handle(handle0), describe_handle(handle1)],
        "horizon": horizon,
        "source": "record_rollout",
    }
    return rollout.trajectory


# --------------------------------------------------------------------------
# populations


@dataclass(frozen=True)
class Population:
    members: tuple[PolicyHandle, ...]
    weights: tuple[float, ...]

    def __init__(self, members: Sequence[PolicyHandle], weights: Optional[Sequence[float]] = None):
        if not members:
            raise ValueError("population must have at least one member")
        if weights is None:
            weights = [1.0] * len(members)
        if len(weights) != len(members):
            raise ValueError("weights must match members")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        total = float(sum(weights))
        object.__setattr__(self, "members", tuple(members))
        object.__setattr__(self, "weights", tuple(w / total for w in weights))


def sample_member(population: Population, rng: random.Random) -> PolicyHandle:
    return rng.choices(population.members, weights=population.weights, k=1)[0]
