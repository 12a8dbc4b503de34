"""FastAPI service exposing sessions over REST plus a per-seat push channel.

Channel messages are newline-terminated JSON objects of shape
{"type": hello|view|ready_status|turn_resolved|chat|error, "payload": {...}}.
"""

from __future__ import annotations

import asyncio
import json
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Query, Request, WebSocket, WebSocketDisconnect
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from ..model.scenario import default_scenario, load_scenario
from ..model.types import FACILITATOR
from .schemas import (
    AckResponse,
    AdvanceRequest,
    AdvanceResponse,
    CreateSessionRequest,
    CreateSessionResponse,
    ErrorResponse,
    JoinRequest,
    JoinResponse,
    OrdersRequest,
    OverrideRequest,
)
from .sessions import Session, SessionError, SessionManager
from ..model.types import TurnOrders


def _channel_message(type_: str, payload: dict) -> str:
    return json.dumps({"type": type_, "payload": payload}, ensure_ascii=False) + "\n"


async def _push(session: Session, token: str, type_: str, payload: dict) -> None:
    for queue in session.channels.get(token, []):
        await queue.put(_channel_message(type_, payload))


async def _broadcast_ready(session: Session) -> None:
    status = {"phase": session.phase, "turn": session.state.turn, **session.ready_status()}
    for token in list(session.channels):
        await _push(session, token, "ready_status", status)


async def _broadcast_turn(session: Session, events) -> None:
    for token in list(session.channels):
        role = session.tokens.get(token)
        if role is None:
            continue
        payload = {
            "turn": session.state.turn,
            "phase": session.phase,
            "outcome": session.state.outcome.to_dict() if session.state.outcome else None,
            "events": session.events_for(role, events),
            "view": session.view_for(token)["view"],
        }
        await _push(session, token, "turn_resolved", payload)


def create_app(data_dir: Optional[str] = None, ui_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="airace session server", version="0.1.0")
    manager = SessionManager(data_dir=data_dir)
    app.state.manager = manager

    @app.exception_handler(SessionError)
    async def _session_error(request: Request, exc: SessionError):
        body = ErrorResponse(code=exc.code, message=str(exc), detail=exc.detail)
        return JSONResponse(status_code=exc.status, content=body.model_dump())

    @app.post("/sessions", response_model=CreateSessionResponse)
    async def create_session(req: CreateSessionRequest):
        scenario = default_scenario() if req.scenario is None else load_scenario(req.scenario)
        session = manager.create(scenario, req.seed, negotiation=req.negotiation)
        return CreateSessionResponse(
            session_id=session.id,
            facilitator_token=session.facilitator_token,
            teams=sorted(session.state.teams),
        )

    @app.post("/sessions/{sid}/join", response_model=JoinResponse)
    async def join(sid: str, req: JoinRequest):
        session = manager.get(sid)
        async with session.lock:
            token = session.join(req.team)
        return JoinResponse(token=token, team=req.team)

    @app.get("/sessions/{sid}/view")
    async def view(sid: str, token: str = Query(...)):
        session = manager.get(sid)
        async with session.lock:
            return session.view_for(token)

    @app.post("/sessions/{sid}/orders", response_model=AckResponse)
    async def submit_orders(sid: str, req: OrdersRequest, token: str = Query(...)):
        session = manager.get(sid)
        async with session.lock:
            orders = TurnOrders.from_dict(req.model_dump())
            session.submit_orders(token, orders)
            ack = AckResponse(ready=session.ready_status(), sealed=session.sealed)
        await _broadcast_ready(session)
        return ack

    @app.post("/sessions/{sid}/advance", response_model=AdvanceResponse)
    async def advance(sid: str, req: AdvanceRequest, token: str = Query(...)):
        session = manager.get(sid)
        async with session.lock:
            if session.role_of(token) != FACILITATOR:
                raise SessionError(403, "not_your_seat", "only the facilitator advances the game")
            events = session.advance(force=req.force)
            response = AdvanceResponse(
                turn=session.state.turn,
                phase=session.phase,
                outcome=session.state.outcome.to_dict() if session.state.outcome else None,
                events=session.events_for(FACILITATOR, events),
            )
        if events:
            await _broadcast_turn(session, events)
        else:
            await _broadcast_ready(session)
        return response

    @app.post("/sessions/{sid}/override", response_model=AckResponse)
    async def override(sid: str, req: OverrideRequest, token: str = Query(...)):
        session = manager.get(sid)
        async with session.lock:
            if session.role_of(token) != FACILITATOR:
                raise SessionError(403, "not_your_seat", "only the facilitator overrides dice")
            payload = {}
            if req.dice is not None:
                payload["dice"] = req.dice
            if req.shock is not None:
                payload["shock"] = req.shock
            session.queue_override(payload)
        return AckResponse(ready=session.ready_status(), sealed=session.sealed)

    @app.websocket("/sessions/{sid}/channel")
    async def channel(ws: WebSocket, sid: str, token: str = Query(...)):
        try:
            session = manager.get(sid)
            role = session.role_of(token)
        except SessionError as exc:
            await ws.close(code=4403, reason=str(exc))
            return
        await ws.accept()
        queue: asyncio.Queue = asyncio.Queue()
        session.channels.setdefault(token, []).append(queue)
        await ws.send_text(
            _channel_message("hello", {"session": sid, "role": role, **session.status()})
        )
        await ws.send_text(_channel_message("view", session.view_for(token)))

        async def sender():
            while True:
                await ws.send_text(await queue.get())

        send_task = asyncio.create_task(sender())
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError:
                    await ws.send_text(_channel_message("error", {"message": "not JSON"}))
                    continue
                if msg.get("type") == "chat":
                    payload = msg.get("payload", {})
                    to = payload.get("to", "all")
                    relay = {"from": role, "to": to, "text": str(payload.get("text", ""))[:2000]}
                    for other_token, other_role in list(session.tokens.items()):
                        if to == "all" or other_role in (to, FACILITATOR, role):
                            await _push(session, other_token, "chat", relay)
                elif msg.get("type") == "view":
                    async with session.lock:
                        payload = session.view_for(token)
                    await ws.send_text(_channel_message("view", payload))
                else:
                    await ws.send_text(
                        _channel_message("error", {"message": f"unknown type {msg.get('type')!r}"})
                    )
        except WebSocketDisconnect:
            pass
        finally:
            send_task.cancel()
            session.channels.get(token, []).remove(queue)

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
