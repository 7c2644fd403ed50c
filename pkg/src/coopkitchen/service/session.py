"""Live probe session: a human plays one slot against a chosen agent.

The session owns the game state on a single asyncio loop. In running mode
a timer drives ticks, substituting Stay when no human action arrived by
the deadline; paused mode advances only through explicit step commands.
Every tick broadcasts one state record with a sequence number that grows
by exactly 1.
"""

from __future__ import annotations

import asyncio
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from coopkitchen.core import Action, History, Layout, deserialize_state, initial_state, serialize_state, step
from coopkitchen.harness import SuccessPredicate, capture_scenario
from coopkitchen.policies import PolicyHandle, describe_handle, stable_seed
from coopkitchen.service.models import (
    CaptureMsg,
    CapturedRecord,
    ErrorRecord,
    LayoutRecord,
    StateRecord,
)


@dataclass
class SessionConfig:
    layout: Layout
    agent: PolicyHandle
    human_slot: int = 0
    tick_rate: float = 4.0
    seed: int = 0
    capture_dir: Path = field(default_factory=lambda: Path("captures"))


class Session:
    def __init__(self, config: SessionConfig):
        self.config = config
        self.layout = config.layout
        self.human_slot = config.human_slot
        self.agent_slot = 1 - config.human_slot
        self.state = initial_state(self.layout)
        self.history = History()
        self.seq = 0
        self.reward_total = 0
        self.mode = "running"
        self.last_events: list = []
        self._pending_action: Optional[Action] = None
        self._agent = config.agent.build(self.layout, self.agent_slot, stable_seed(config.seed, "session"))
        self._subscribers: list[asyncio.Queue] = []
        self._loop_task: Optional[asyncio.Task] = None

    # ---------------------------------------------------------- broadcast

    def subscribe(self) -> asyncio.Queue:
        q: asyncio.Queue = asyncio.Queue()
        self._subscribers.append(q)
        return q

    def unsubscribe(self, q: asyncio.Queue) -> None:
        if q in self._subscribers:
            self._subscribers.remove(q)

    def _broadcast(self, record) -> None:
        for q in self._subscribers:
            q.put_nowait(record)

    def layout_record(self) -> LayoutRecord:
        return LayoutRecord(
            name=self.layout.name,
            grid=self.layout.as_text().split("\n"),
            human_slot=self.human_slot,
            agent=describe_handle(self.config.agent),
        )

    def state_record(self) -> StateRecord:
        return StateRecord(
            seq=self.seq,
            tick=self.state.tick,
            state=serialize_state(self.state),
            last_events=[
                {"kind": e.kind, "player": e.player, "cell": list(e.cell) if e.cell else None}
                for e in self.last_events
            ],
            reward_total=self.reward_total,
            mode=self.mode,
        )

    # ---------------------------------------------------------- game loop

    def _emit(self) -> None:
        """Every broadcast gets the next sequence number, ticks or not."""
        self.seq += 1
        self._broadcast(self.state_record())

    def tick(self) -> None:
        human_action = self._pending_action or Action.STAY
        self._pending_action = None
        agent_action = self._agent.act(self.history, self.state)
        actions = [None, None]
        actions[self.human_slot] = human_action
        actions[self.agent_slot] = agent_action
        outcome = step(self.layout, self.state, tuple(actions))
        self.history.append(self.state, tuple(actions))
        self.state = outcome.next_state
        self.reward_total += outcome.reward
        self.last_events = list(outcome.events)
        self._emit()

    async def run(self) -> None:
        period = 1.0 / self.config.tick_rate
        while True:
            await asyncio.sleep(period)
            if self.mode == "running":
                self.tick()

    def start(self) -> None:
        if self._loop_task is None:
            self._loop_task = asyncio.get_event_loop().create_task(self.run())

    async def stop(self) -> None:
        if self._loop_task is not None:
            self._loop_task.cancel()
            try:
                await self._loop_task
            except asyncio.CancelledError:
                pass
            self._loop_task = None

    # ---------------------------------------------------------- commands

    def handle_act(self, action_name: str) -> None:
        self._pending_action = Action(action_name)

    def handle_pause(self) -> None:
        self.mode = "paused"
        self._emit()

    def handle_resume(self) -> None:
        self.mode = "running"
        self._emit()

    def handle_step(self, n: int):
        if self.mode != "paused":
            return ErrorRecord(message="step is only available while paused")
        for _ in range(n):
            self.tick()
        return None

    def handle_set_state(self, text: str):
        try:
            new_state = deserialize_state(text, self.layout)
        except ValueError as exc:
            return ErrorRecord(message=f"invalid state snapshot: {exc}")
        self.state = new_state
        self.history = History()  # the transcript restarts at the injected state
        self.reward_total = 0
        self.last_events = []
        self._emit()
        return None

    def handle_capture(self, msg: CaptureMsg):
        if self.mode != "paused":
            return ErrorRecord(message="pause the session before capturing")
        try:
            predicate = SuccessPredicate(
                kind=msg.predicate.kind,
                ticks=msg.predicate.ticks,
                object=msg.predicate.object,
                cell=tuple(msg.predicate.cell) if msg.predicate.cell else None,
                onions=msg.predicate.onions,
                points=msg.predicate.points,
            )
            path = capture_scenario(
                self.layout,
                self.state,
                category=msg.category,
                partner_spec=msg.partner,
                predicate=predicate,
                scenario_id=msg.id,
                out_dir=self.config.capture_dir,
                tested_agent_index=msg.tested_agent_index,
                horizon=msg.horizon,
            )
        except ValueError as exc:
            return ErrorRecord(message=str(exc))
        return CapturedRecord(id=msg.id, path=str(path))
