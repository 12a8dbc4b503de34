"""Per-team fog-of-war projection of the game state."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..errors import UnknownViewer
from .state import GameState, allocatable_points
from .types import FACILITATOR, GameEvent, NodeKind


@dataclass
class KnowledgeView:
    """What one seat is allowed to know.

    The facilitator view equals the full state; team views carry their own
    resources and progress, everyone's public posture (the three powers,
    public completions, concerns, treaties) and intel gained via monitor
    operations.
    """

    viewer: str
    turn: int
    year: int
    stability: int
    outcome: Optional[dict]
    teams: dict[str, dict]
    progress: dict[str, dict[str, dict]]
    concerns: list[dict]
    treaties: list[dict]
    deployments: list[dict]
    intel: list[dict]
    allocatable: Optional[int] = None
    events: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "viewer": self.viewer,
            "turn": self.turn,
            "year": self.year,
            "stability": self.stability,
            "outcome": self.outcome,
            "teams": self.teams,
            "progress": self.progress,
            "concerns": self.concerns,
            "treaties": self.treaties,
            "deployments": self.deployments,
            "intel": self.intel,
            "allocatable": self.allocatable,
            "events": self.events,
        }


def _public_team_slice(state: GameState, tid: str) -> dict:
    ts = state.team(tid)
    caps = []
    for node in state.scenario.tech_tree:
        entry = state.entry(tid, node.id)
        if entry.completed and entry.public:
            caps.extend(node.effects.get("flags", []))
    return {
        "id": ts.id,
        "kind": ts.kind.value,
        "allegiance": ts.allegiance,
        "party": ts.party,
        "import_dependent": ts.import_dependent,
        "controlled_by": list(ts.controlled_by),
        "ppp_partner": ts.ppp_partner,
        "resources": {"soft": ts.resources.soft, "hard": ts.resources.hard, "cyber": ts.resources.cyber},
        "capabilities": sorted(set(caps)),
    }


def filter_events(events: list[GameEvent], viewer: str) -> list[GameEvent]:
    return [e for e in events if e.visible_to(viewer)]


def knowledge_view(
    state: GameState, viewer: str, events: Optional[list[GameEvent]] = None
) -> KnowledgeView:
    """Project the state for one viewer; pure, state is not touched.

    `events` (if given) are filtered by visibility and embedded.
    """
    if viewer != FACILITATOR and viewer not in state.teams:
        raise UnknownViewer(f"unknown viewer: {viewer!r}")

    visible_events = [e.to_dict() for e in filter_events(events or [], viewer)]

    if viewer == FACILITATOR:
        return KnowledgeView(
            viewer=viewer,
            turn=state.turn,
            year=state.year,
            stability=state.stability,
            outcome=state.outcome.to_dict() if state.outcome else None,
            teams={tid: state.teams[tid].to_dict() for tid in sorted(state.teams)},
            progress={
                tid: {nid: e.to_dict() for nid, e in sorted(state.progress[tid].items())}
                for tid in sorted(state.progress)
            },
            concerns=[c.to_dict() for c in state.concerns],
            treaties=[t.to_dict() for t in state.treaties],
            deployments=[d.to_dict() for d in state.deployments],
            intel=[i.to_dict() for i in state.intel],
            events=visible_events,
        )

    teams: dict[str, dict] = {}
    progress: dict[str, dict[str, dict]] = {}
    my_intel = [i for i in state.intel if i.owner == viewer]
    intel_idx = {}
    for i in my_intel:
        intel_idx[(i.target, i.node)] = i

    for tid in sorted(state.teams):
        if tid == viewer:
            teams[tid] = state.teams[tid].to_dict()
            progress[tid] = {
                nid: e.to_dict() for nid, e in sorted(state.progress[tid].items())
            }
            continue
        teams[tid] = _public_team_slice(state, tid)
        slice_: dict[str, dict] = {}
        for nid, e in sorted(state.progress[tid].items()):
            if e.completed and e.public:
                slice_[nid] = {"completed": True, "public": True}
            if (tid, nid) in intel_idx:
                entry = intel_idx[(tid, nid)]
                slice_[nid] = {
                    "points": entry.points,
                    "completed": entry.completed,
                    "intel_turn": entry.turn,
                }
        progress[tid] = slice_

    return KnowledgeView(
        viewer=viewer,
        turn=state.turn,
        year=state.year,
        stability=state.stability,
        outcome=state.outcome.to_dict() if state.outcome else None,
        teams=teams,
        progress=progress,
        concerns=[c.to_dict() for c in state.concerns],
        treaties=[t.to_dict() for t in state.treaties],
        deployments=[d.to_dict() for d in state.deployments],
        intel=[i.to_dict() for i in my_intel],
        allocatable=allocatable_points(state, viewer),
        events=visible_events,
    )
