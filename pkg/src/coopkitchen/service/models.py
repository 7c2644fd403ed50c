"""Wire models for the HTTP endpoints and the live-session socket protocol.

Socket records travel as JSON text frames over a persistent WebSocket. The
server emits layout/state/error/captured records; clients send act, pause,
resume, step, set_state, and capture commands.
"""

from __future__ import annotations

from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, Field

# ---------------------------------------------------------------- HTTP


class LayoutInfo(BaseModel):
    name: str
    grid: list[str]
    width: int
    height: int
    spawn_points: list[tuple[int, int]]


class RunSuiteRequest(BaseModel):
    agent: str
    suite_path: Optional[str] = None
    seed: int = 0
    jobs: int = Field(default=1, ge=1, le=64)


class RunSuiteResponse(BaseModel):
    report: dict
    warnings: list[str]


class ValidateRequest(BaseModel):
    agent: str
    layout: str
    episodes_per_member: int = Field(default=5, ge=1)
    horizon: int = Field(default=400, ge=1)
    gamma: float = Field(default=1.0, gt=0, le=1)
    seed: int = 0


class ValidateResponse(BaseModel):
    report: dict


class RecordRequest(BaseModel):
    layout: str
    agents: list[str] = Field(min_length=2, max_length=2)
    horizon: int = Field(default=400, ge=1)
    seed: int = 0


class RecordResponse(BaseModel):
    trajectory: dict


# ---------------------------------------------------------------- socket


class LayoutRecord(BaseModel):
    type: Literal["layout"] = "layout"
    name: str
    grid: list[str]
    human_slot: int
    agent: str


class StateRecord(BaseModel):
    type: Literal["state"] = "state"
    seq: int
    tick: int
    state: str  # canonical snapshot text
    last_events: list[dict]
    reward_total: int
    mode: Literal["running", "paused"]


class ErrorRecord(BaseModel):
    type: Literal["error"] = "error"
    message: str


class CapturedRecord(BaseModel):
    type: Literal["captured"] = "captured"
    id: str
    path: str


ServerRecord = Union[LayoutRecord, StateRecord, ErrorRecord, CapturedRecord]


class ActMsg(BaseModel):
    type: Literal["act"] = "act"
    action: Literal["UP", "DOWN", "LEFT", "RIGHT", "STAY", "INTERACT"]


class PauseMsg(BaseModel):
    type: Literal["pause"] = "pause"


class ResumeMsg(BaseModel):
    type: Literal["resume"] = "resume"


class StepMsg(BaseModel):
    type: Literal["step"] = "step"
    n: int = Field(default=1, ge=1, le=1000)


class SetStateMsg(BaseModel):
    type: Literal["set_state"] = "set_state"
    state: str


class CapturePredicate(BaseModel):
    kind: str
    ticks: int
    object: Optional[str] = None
    cell: Optional[tuple[int, int]] = None
    onions: Optional[int] = None
    points: Optional[int] = None


class CaptureMsg(BaseModel):
    type: Literal["capture"] = "capture"
    id: str
    category: Literal["SR", "AR", "AMR"]
    predicate: CapturePredicate
    partner: str
    tested_agent_index: int = 0
    horizon: Optional[int] = None


ClientMsg = Annotated[
    Union[ActMsg, PauseMsg, ResumeMsg, StepMsg, SetStateMsg, CaptureMsg],
    Field(discriminator="type"),
]


class ClientEnvelope(BaseModel):
    """Validator wrapper for inbound socket messages."""

    msg: ClientMsg
