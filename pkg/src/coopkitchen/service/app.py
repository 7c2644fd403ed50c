"""HTTP service wrapping the core package, plus the live-session WebSocket."""

from __future__ import annotations

import asyncio
import json
from typing import Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from pydantic import ValidationError

from coopkitchen import __version__
from coopkitchen.core import bundled_layout, bundled_layout_names
from coopkitchen.evaluation import EvalConfig, default_validation_population, validation_reward
from coopkitchen.harness import SchemaError, load_suite, run_suite
from coopkitchen.policies import parse_agent_spec, record_rollout
from coopkitchen.service.models import (
    ActMsg,
    CaptureMsg,
    ClientEnvelope,
    ErrorRecord,
    LayoutInfo,
    PauseMsg,
    RecordRequest,
    RecordResponse,
    ResumeMsg,
    RunSuiteRequest,
    RunSuiteResponse,
    SetStateMsg,
    StepMsg,
    ValidateRequest,
    ValidateResponse,
)
from coopkitchen.service.session import Session, SessionConfig


def create_app(session_config: Optional[SessionConfig] = None) -> FastAPI:
    app = FastAPI(title="coopkitchen", version=__version__)
    app.state.session = Session(session_config) if session_config else None

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/layouts")
    def layouts() -> list[str]:
        return bundled_layout_names()

    @app.get("/layouts/{name}", response_model=LayoutInfo)
    def layout_info(name: str):
        try:
            layout = bundled_layout(name)
        except ValueError:
            raise HTTPException(status_code=404, detail=f"unknown layout {name!r}") from None
        return LayoutInfo(
            name=layout.name,
            grid=layout.as_text().split("\n"),
            width=layout.width,
            height=layout.height,
            spawn_points=list(layout.spawn_points),
        )

    @app.post("/suite/run", response_model=RunSuiteResponse)
    def suite_run(req: RunSuiteRequest):
        try:
            tested = parse_agent_spec(req.agent)
            suite, warnings = load_suite(req.suite_path)
        except (ValueError, SchemaError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        report = run_suite(suite, tested, base_seed=req.seed, parallelism=req.jobs)
        return RunSuiteResponse(report=report.to_dict(), warnings=warnings)

    @app.post("/validate", response_model=ValidateResponse)
    def validate(req: ValidateRequest):
        try:
            tested = parse_agent_spec(req.agent)
            layout = bundled_layout(req.layout)
            population = default_validation_population(layout)
            config = EvalConfig(
                episodes_per_member=req.episodes_per_member,
                horizon=req.horizon,
                gamma=req.gamma,
                seed=req.seed,
            )
        except (ValueError, FileNotFoundError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        report = validation_reward(layout, tested, population, config)
        return ValidateResponse(report=report.to_dict())

    @app.post("/rollouts/record", response_model=RecordResponse)
    def record(req: RecordRequest):
        try:
            layout = bundled_layout(req.layout)
            handles = [parse_agent_spec(s) for s in req.agents]
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        traj = record_rollout(layout, handles[0], handles[1], req.horizon, req.seed)
        return RecordResponse(trajectory=json.loads(traj.to_json()))

    @app.websocket("/session")
    async def session_socket(ws: WebSocket):
        session: Optional[Session] = app.state.session
        if session is None:
            await ws.close(code=4004, reason="no live session on this server")
            return
        await ws.accept()
        session.start()
        queue = session.subscribe()
        await ws.send_text(session.layout_record().model_dump_json())
        await ws.send_text(session.state_record().model_dump_json())

        async def pump_outbound():
            while True:
                record = await queue.get()
                await ws.send_text(record.model_dump_json())

        pump = asyncio.create_task(pump_outbound())
        try:
            while True:
                raw = await ws.receive_text()
                reply = _dispatch(session, raw)
                if reply is not None:
                    await ws.send_text(reply.model_dump_json())
        except WebSocketDisconnect:
            pass
        finally:
            pump.cancel()
            session.unsubscribe(queue)

    return app


def _dispatch(session: Session, raw: str):
    """Apply one client message; returns a direct reply record or None."""
    try:
        envelope = ClientEnvelope(msg=json.loads(raw))
    except (json.JSONDecodeError, ValidationError) as exc:
        return ErrorRecord(message=f"malformed message: {exc}")
    msg = envelope.msg
    if isinstance(msg, ActMsg):
        session.handle_act(msg.action)
        return None
    if isinstance(msg, PauseMsg):
        session.handle_pause()
        return None
    if isinstance(msg, ResumeMsg):
        session.handle_resume()
        return None
    if isinstance(msg, StepMsg):
        return session.handle_step(msg.n)
    if isinstance(msg, SetStateMsg):
        return session.handle_set_state(msg.state)
    if isinstance(msg, CaptureMsg):
        return session.handle_capture(msg)
    return ErrorRecord(message=f"unhandled message type {msg.type!r}")  # pragma: no cover
