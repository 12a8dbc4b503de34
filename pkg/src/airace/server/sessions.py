"""Hosted sessions: commit-reveal barrier, seats, facilitator controls.

All mutation of one session happens under its own lock; views are computed
from the authoritative state, never from client-supplied data.
"""

from __future__ import annotations

import asyncio
import secrets
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..engine.turn import resolve_turn
from ..errors import GameError
from ..model.orders import validate_orders
from ..model.scenario import Scenario
from ..model.state import GameState, creation_event, new_game, state_hash
from ..model.types import FACILITATOR, GameEvent, TurnOrders, facilitator_only
from ..model.views import filter_events, knowledge_view
from ..replay import EventLog, LogWriter, make_header
from ..rng import OverridableDice, RngDice

PHASE_LOBBY = "lobby"
PHASE_NEGOTIATION = "negotiation"
PHASE_AWAITING = "awaiting_orders"
PHASE_RESOLVING = "resolving"
PHASE_ENDED = "ended"


class SessionError(GameError):
    def __init__(self, status: int, code: str, message: str, detail: Optional[list] = None):
        self.status = status
        self.code = code
        self.detail = detail or []
        super().__init__(message)


def _token() -> str:
    return secrets.token_hex(16)  # 128-bit unguessable seat token


@dataclass
class Seat:
    token: str
    team: str  # team id, or FACILITATOR


@dataclass
class Session:
    id: str
    scenario: Scenario
    seed: int
    state: GameState
    facilitator_token: str
    log: EventLog
    writer: Optional[LogWriter] = None
    phase: str = PHASE_LOBBY
    negotiation: bool = False
    deadline: Optional[str] = None
    seats: dict[str, list[str]] = field(default_factory=dict)  # team -> tokens
    tokens: dict[str, str] = field(default_factory=dict)  # token -> team/facilitator
    submitted: dict[str, TurnOrders] = field(default_factory=dict)
    sealed: bool = False  # all live teams in: orders immutable until resolve
    queued_d6: list[int] = field(default_factory=list)
    queued_2d6: list[int] = field(default_factory=list)
    queued_shock: Optional[str] = None
    channels: dict[str, list[asyncio.Queue]] = field(default_factory=dict)  # token -> queues
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)

    # ----------------------------------------------------------- helpers

    def role_of(self, token: str) -> str:
        role = self.tokens.get(token)
        if role is None:
            raise SessionError(403, "not_your_seat", "unknown or revoked token")
        return role

    def ready_status(self) -> dict:
        live = self.state.live_teams()
        return {
            "submitted": sorted(t for t in self.submitted if t in live),
            "awaiting": sorted(t for t in live if t not in self.submitted),
        }

    def status(self) -> dict:
        return {
            "session": self.id,
            "phase": self.phase,
            "turn": self.state.turn,
            "deadline": self.deadline,
            "ready": self.ready_status(),
            "outcome": self.state.outcome.to_dict() if self.state.outcome else None,
        }

    def _append_events(self, events: list[GameEvent]) -> None:
        for e in events:
            self.log.append(e)
            if self.writer is not None:
                self.writer.append(e)

    # --------------------------------------------------------- lifecycle

    def join(self, team: str) -> str:
        if team == FACILITATOR:
            raise SessionError(400, "bad_role", "the facilitator token was issued at creation")
        if team not in self.state.teams:
            raise SessionError(404, "unknown_team", f"no team {team!r} in this session")
        token = _token()
        self.seats.setdefault(team, []).append(token)
        self.tokens[token] = team
        return token

    def start(self) -> None:
        if self.phase != PHASE_LOBBY:
            raise SessionError(409, "phase_violation", f"cannot start from {self.phase}")
        self.phase = PHASE_NEGOTIATION if self.negotiation else PHASE_AWAITING

    def submit_orders(self, token: str, orders: TurnOrders) -> None:
        role = self.role_of(token)
        if role == FACILITATOR:
            raise SessionError(403, "not_your_seat", "the facilitator does not submit orders")
        if orders.team != role:
            raise SessionError(403, "not_your_seat", f"token holds a seat on {role}, not {orders.team}")
        if self.phase != PHASE_AWAITING:
            raise SessionError(409, "phase_violation", f"orders are not accepted during {self.phase}")
        if self.sealed:
            raise SessionError(409, "phase_violation", "all teams have committed; orders are sealed")
        problems = validate_orders(self.state, orders)
        if problems:
            raise SessionError(422, "validation_failed", "orders violate the rules", detail=problems)
        self.submitted[orders.team] = orders
        if set(self.state.live_teams()) <= set(self.submitted):
            self.sealed = True  # reveal barrier: no edits once everyone is in

    def advance(self, force: bool = False) -> list[GameEvent]:
        if self.phase == PHASE_LOBBY:
            self.start()
            return []
        if self.phase == PHASE_NEGOTIATION:
            self.phase = PHASE_AWAITING
            return []
        if self.phase != PHASE_AWAITING:
            raise SessionError(409, "phase_violation", f"cannot advance during {self.phase}")
        live = self.state.live_teams()
        missing = [t for t in live if t not in self.submitted]
        if missing and not force:
            raise SessionError(
                409, "phase_violation", f"awaiting orders from: {', '.join(sorted(missing))}"
            )
        orders = {t: self.submitted.get(t, TurnOrders.empty(t, self.state.turn + 1)) for t in live}

        self.phase = PHASE_RESOLVING
        dice = OverridableDice(RngDice(self.state.rng.copy()))
        for v in self.queued_d6:
            dice.queue_d6(v)
        for v in self.queued_2d6:
            dice.queue_2d6(v)
        injected = self.queued_shock
        self.queued_d6, self.queued_2d6, self.queued_shock = [], [], None

        new_state, events = resolve_turn(self.state, orders, dice, injected_shock=injected)
        self.state = new_state
        self._append_events(events)
        self.submitted = {}
        self.sealed = False
        self.phase = PHASE_ENDED if self.state.outcome is not None else (
            PHASE_NEGOTIATION if self.negotiation else PHASE_AWAITING
        )
        return events

    def queue_override(self, override: dict) -> GameEvent:
        if "shock" in override:
            self.queued_shock = str(override["shock"])
        elif "dice" in override:
            spec = override["dice"]
            kind, value = spec.get("kind", "2d6"), int(spec["value"])
            if kind == "d6":
                if not 1 <= value <= 6:
                    raise SessionError(400, "bad_override", "d6 must be 1..6")
                self.queued_d6.append(value)
            elif kind == "2d6":
                if not 2 <= value <= 12:
                    raise SessionError(400, "bad_override", "2d6 must be 2..12")
                self.queued_2d6.append(value)
            else:
                raise SessionError(400, "bad_override", f"unknown dice kind {kind!r}")
        else:
            raise SessionError(400, "bad_override", "override must carry 'dice' or 'shock'")
        event = GameEvent(
            seq=self.state.event_seq,
            turn=self.state.turn + 1,
            kind="facilitator_override",
            visibility=facilitator_only(),
            payload=dict(override),
        )
        self.state.event_seq += 1
        self._append_events([event])
        return event

    def view_for(self, token: str) -> dict:
        role = self.role_of(token)
        view = knowledge_view(self.state, role, events=self.log.events)
        payload = dict(self.status())
        payload["role"] = role
        payload["view"] = view.to_dict()
        payload["scenario"] = self.scenario.to_dict()  # game rules are common knowledge
        if role == FACILITATOR:
            payload["sealed_orders"] = {t: o.to_dict() for t, o in sorted(self.submitted.items())}
            payload["state_hash"] = state_hash(self.state)
        return payload

    def events_for(self, role: str, events: list[GameEvent]) -> list[dict]:
        return [e.to_dict() for e in filter_events(events, role)]


class SessionManager:
    def __init__(self, data_dir: Optional[str] = None):
        self.sessions: dict[str, Session] = {}
        self.data_dir = Path(data_dir) if data_dir else None
        if self.data_dir:
            self.data_dir.mkdir(parents=True, exist_ok=True)

    def create(self, scenario: Scenario, seed: int, negotiation: bool = False) -> Session:
        sid = secrets.token_hex(8)
        state = new_game(scenario, seed)
        header = make_header(scenario, seed)
        log = EventLog(header=header)
        created = creation_event(scenario, seed, state)
        log.append(created)
        writer = None
        if self.data_dir:
            writer = LogWriter(self.data_dir / f"{sid}.irlog", header)
            writer.append(created)
        facilitator_token = _token()
        session = Session(
            id=sid,
            scenario=scenario,
            seed=seed,
            state=state,
            facilitator_token=facilitator_token,
            log=log,
            writer=writer,
            negotiation=negotiation,
        )
        session.tokens[facilitator_token] = FACILITATOR
        self.sessions[sid] = session
        return session

    def get(self, sid: str) -> Session:
        session = self.sessions.get(sid)
        if session is None:
            raise SessionError(404, "unknown_session", f"no session {sid!r}")
        return session
