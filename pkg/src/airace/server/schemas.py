"""Pydantic request/response models for the session API."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class CreateSessionRequest(BaseModel):
    scenario: Optional[dict] = None  # None selects the bundled default
    seed: int = 0
    negotiation: bool = False


class CreateSessionResponse(BaseModel):
    session_id: str
    facilitator_token: str
    teams: list[str]


class JoinRequest(BaseModel):
    team: str


class JoinResponse(BaseModel):
    token: str
    team: str


class OrdersRequest(BaseModel):
    team: str
    turn: int
    actions: list[dict] = Field(default_factory=list)
    rnd_allocation: dict[str, int] = Field(default_factory=dict)
    rnd_secret: bool = False
    treaty_compliance: dict[str, bool] = Field(default_factory=dict)
    deploy: Optional[dict] = None
    consent_rtai: list[str] = Field(default_factory=list)


class AckResponse(BaseModel):
    ok: bool = True
    ready: dict[str, list[str]] = Field(default_factory=dict)
    sealed: bool = False


class AdvanceRequest(BaseModel):
    force: bool = False


class AdvanceResponse(BaseModel):
    turn: int
    phase: str
    outcome: Optional[dict] = None
    events: list[dict] = Field(default_factory=list)


class OverrideRequest(BaseModel):
    dice: Optional[dict] = None  # {"kind": "d6"|"2d6", "value": int}
    shock: Optional[str] = None


class ErrorResponse(BaseModel):
    code: str
    message: str
    detail: list[Any] = Field(default_factory=list)
