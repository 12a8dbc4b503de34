"""Working context threaded through the phases of a turn resolution."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..model.state import GameState
from ..model.types import (
    Concern,
    GameEvent,
    NodeKind,
    TurnOrders,
    clamp,
    public,
    team_only,
)
from ..rng import DiceSource


@dataclass
class TurnContext:
    state: GameState  # private working copy, mutated freely
    orders: dict[str, TurnOrders]
    dice: DiceSource
    turn: int  # the turn being resolved (state.turn + 1 at entry)
    events: list[GameEvent] = field(default_factory=list)
    deferred_alloc: dict[str, dict[str, int]] = field(default_factory=dict)  # team -> banned allocation
    banned_by: dict[str, dict[str, set]] = field(default_factory=dict)  # team -> node -> treaty ids
    pending_rnd_penalty: dict[str, int] = field(default_factory=dict)
    injected_shock: Optional[str] = None

    @property
    def scenario(self):
        return self.state.scenario

    def emit(self, kind: str, visibility: dict, payload: dict) -> GameEvent:
        ev = GameEvent(
            seq=self.state.event_seq,
            turn=self.turn,
            kind=kind,
            visibility=visibility,
            payload=payload,
        )
        self.state.event_seq += 1
        self.events.append(ev)
        return ev

    def action_visibility(self, team: str, action) -> dict:
        if action.visibility.value == "secret":
            return team_only(team)
        return public()

    # -- resource and stability helpers ---------------------------------

    def pay(self, team: str, costs: dict[str, int]) -> bool:
        """Deduct catalog costs; returns False (nothing deducted) if the
        team can no longer afford them."""
        res = self.state.team(team).resources
        for kind, amt in costs.items():
            if getattr(res, kind) < amt:
                return False
        for kind, amt in costs.items():
            res.add(kind, -amt)
        return True

    def stability_add(self, delta: int) -> int:
        self.state.stability = clamp(self.state.stability + delta, 0, 10)
        return self.state.stability

    # -- tech progress ---------------------------------------------------

    def grant_points(self, team: str, node_id: str, points: int, publish: bool = True) -> bool:
        """Add progress; on crossing the cost threshold, complete the node:
        emit the completion event, spawn the application's concern, apply
        effects. Returns True if the node completed now."""
        if points <= 0:
            return False
        node = self.scenario.node(node_id)
        entry = self.state.entry(team, node_id)
        if entry.completed:
            return False
        entry.points += points
        if entry.points < node.cost:
            return False

        entry.completed = True
        entry.public = publish
        vis = public() if publish else team_only(team)
        self.emit(
            "node_completed",
            vis,
            {"team": team, "node": node_id, "kind": node.kind.value, "lane": node.lane.value, "level": node.level},
        )
        if node.kind == NodeKind.APPLICATION and node.concern_severity is not None:
            cid = f"concern_{team}_{node_id}"
            if not any(c.id == cid for c in self.state.concerns):
                concern = Concern(
                    id=cid,
                    source_node=node_id,
                    owner=team,
                    severity=node.concern_severity,
                )
                self.state.concerns.append(concern)
                self.emit(
                    "concern_spawned",
                    public(),  # concerns are always common knowledge
                    {"id": cid, "team": team, "node": node_id, "severity": node.concern_severity},
                )
        team_state = self.state.team(team)
        for res, delta in sorted(node.effects.get("resources", {}).items()):
            team_state.resources.add(res, delta)
        for flag in node.effects.get("flags", []):
            if flag not in team_state.capabilities:
                team_state.capabilities.append(flag)
        return True

    def reduce_points(self, team: str, node_id: str, points: int) -> int:
        """Sabotage path: the only way progress ever decreases."""
        node = self.scenario.node(node_id)
        entry = self.state.entry(team, node_id)
        before = entry.points
        entry.points = max(0, entry.points - points)
        entry.completed = entry.points >= node.cost
        return before - entry.points

    def publish_node(self, team: str, node_id: str) -> None:
        entry = self.state.entry(team, node_id)
        if entry.completed:
            entry.public = True
