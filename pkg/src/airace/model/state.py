"""Authoritative game state, creation, hashing and capacity arithmetic."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional

from ..rng import GameRng
from .scenario import Scenario
from .types import (
    Concern,
    DeploymentRecord,
    GameEvent,
    GameOutcome,
    IntelEntry,
    NodeKind,
    ProgressEntry,
    TeamState,
    Treaty,
    public,
)


def canonical_json(obj) -> str:
    """Canonical form used for hashing and byte-equality: sorted keys, no
    insignificant whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest_of(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


@dataclass
class GameState:
    scenario: Scenario
    turn: int
    year: int
    stability: int
    teams: dict[str, TeamState]
    progress: dict[str, dict[str, ProgressEntry]]
    concerns: list[Concern] = field(default_factory=list)
    treaties: list[Treaty] = field(default_factory=list)
    pooled_defense: dict[str, int] = field(default_factory=dict)
    rng: GameRng = field(default_factory=GameRng)
    outcome: Optional[GameOutcome] = None
    event_seq: int = 0
    deployments: list[DeploymentRecord] = field(default_factory=list)
    pressure_markers: int = 0
    interference: list[str] = field(default_factory=list)
    shocks_drawn: list[str] = field(default_factory=list)
    intel: list[IntelEntry] = field(default_factory=list)

    # -- accessors -----------------------------------------------------

    def team(self, team_id: str) -> TeamState:
        return self.teams[team_id]

    def live_teams(self) -> list[str]:
        """Teams expected to submit orders: everyone not nationalised."""
        return sorted(t for t, ts in self.teams.items() if not ts.controlled)

    def entry(self, team: str, node: str) -> ProgressEntry:
        return self.progress[team][node]

    def completed(self, team: str, node: str) -> bool:
        return self.progress[team][node].completed

    def unlocked(self, team: str, node_id: str) -> bool:
        node = self.scenario.node(node_id)
        return all(self.completed(team, p) for p in node.prereqs)

    def bloc_safety_completed(self, team: str) -> set[str]:
        """Safety nodes completed by anyone in the team's bloc (research is
        shared within a bloc)."""
        done: set[str] = set()
        for member in self.scenario.bloc_of(team):
            for n in self.scenario.safety_nodes():
                if self.completed(member, n.id):
                    done.add(n.id)
        return done

    def treaty(self, treaty_id: str) -> Optional[Treaty]:
        for t in self.treaties:
            if t.id == treaty_id:
                return t
        return None

    def effective_compute(self, team: str, turn: Optional[int] = None) -> int:
        ts = self.team(team)
        compute = ts.resources.compute
        if turn is not None and turn <= ts.compute_halved_until:
            compute //= 2
        return compute

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "scenario_digest": digest_of(self.scenario.to_dict()),
            "turn": self.turn,
            "year": self.year,
            "stability": self.stability,
            "teams": {tid: self.teams[tid].to_dict() for tid in sorted(self.teams)},
            "progress": {
                tid: {nid: e.to_dict() for nid, e in sorted(self.progress[tid].items())}
                for tid in sorted(self.progress)
            },
            "concerns": [c.to_dict() for c in self.concerns],
            "treaties": [t.to_dict() for t in self.treaties],
            "pooled_defense": {k: self.pooled_defense[k] for k in sorted(self.pooled_defense)},
            "rng": self.rng.to_dict(),
            "outcome": self.outcome.to_dict() if self.outcome else None,
            "event_seq": self.event_seq,
            "deployments": [d.to_dict() for d in self.deployments],
            "pressure_markers": self.pressure_markers,
            "interference": sorted(self.interference),
            "shocks_drawn": list(self.shocks_drawn),
            "intel": [i.to_dict() for i in self.intel],
        }

    @classmethod
    def from_dict(cls, d: dict, scenario: Scenario) -> "GameState":
        if d.get("scenario_digest") != digest_of(scenario.to_dict()):
            raise ValueError("state was produced by a different scenario")
        return cls(
            scenario=scenario,
            turn=int(d["turn"]),
            year=int(d["year"]),
            stability=int(d["stability"]),
            teams={tid: TeamState.from_dict(t) for tid, t in d["teams"].items()},
            progress={
                tid: {nid: ProgressEntry.from_dict(e) for nid, e in nodes.items()}
                for tid, nodes in d["progress"].items()
            },
            concerns=[Concern.from_dict(c) for c in d.get("concerns", [])],
            treaties=[Treaty.from_dict(t) for t in d.get("treaties", [])],
            pooled_defense={k: int(v) for k, v in d.get("pooled_defense", {}).items()},
            rng=GameRng.from_dict(d["rng"]),
            outcome=GameOutcome.from_dict(d["outcome"]) if d.get("outcome") else None,
            event_seq=int(d.get("event_seq", 0)),
            deployments=[DeploymentRecord.from_dict(x) for x in d.get("deployments", [])],
            pressure_markers=int(d.get("pressure_markers", 0)),
            interference=list(d.get("interference", [])),
            shocks_drawn=list(d.get("shocks_drawn", [])),
            intel=[IntelEntry.from_dict(i) for i in d.get("intel", [])],
        )

    def copy(self) -> "GameState":
        return GameState.from_dict(self.to_dict(), self.scenario)


def state_hash(state: GameState) -> str:
    """SHA-256 hex digest over the canonical state serialization."""
    return digest_of(state.to_dict())


def new_game(scenario: Scenario, seed: int) -> GameState:
    """Fresh game at turn 0: full progress map at zero, RNG expanded from
    the seed via splitmix64 into a xoshiro256** state."""
    teams = {t.id: TeamState.from_spec(t) for t in scenario.teams}
    progress = {
        t.id: {n.id: ProgressEntry() for n in scenario.tech_tree} for t in scenario.teams
    }
    state = GameState(
        scenario=scenario,
        turn=0,
        year=scenario.constants.start_year,
        stability=scenario.constants.start_stability,
        teams=teams,
        progress=progress,
        rng=GameRng.from_seed(seed),
        event_seq=1,  # seq 0 is the creation event
    )
    return state


def creation_event(scenario: Scenario, seed: int, state: GameState) -> GameEvent:
    """The seq-0 event every log starts with."""
    return GameEvent(
        seq=0,
        turn=0,
        kind="game_created",
        visibility=public(),
        payload={
            "scenario": scenario.name,
            "scenario_digest": digest_of(scenario.to_dict()),
            "seed": seed,
            "stability": state.stability,
            "year": state.year,
            "teams": sorted(state.teams),
        },
    )


def usable_rnd_points(team: TeamState, effective_compute: Optional[int] = None) -> int:
    """R&D capacity: researchers and data generate work, compute bottlenecks
    it: min(floor((talent + data) / 2), compute)."""
    compute = team.resources.compute if effective_compute is None else effective_compute
    return min((team.resources.talent + team.resources.data) // 2, compute)


def allocatable_points(state: GameState, team_id: str, turn: Optional[int] = None) -> int:
    """Points a team may allocate this turn: own usable capacity plus the
    capacity of nationalised teams it controls and a PPP partner state's
    contribution, minus any regulation malus."""
    if turn is None:
        turn = state.turn + 1
    ts = state.team(team_id)
    if ts.controlled:
        return 0
    total = usable_rnd_points(ts, state.effective_compute(team_id, turn))
    for other_id, other in state.teams.items():
        if team_id in other.controlled_by:
            total += usable_rnd_points(other, state.effective_compute(other_id, turn))
    # a PPP pools the state's capacity into the corporation
    if ts.ppp_partner is not None:
        partner = state.team(ts.ppp_partner)
        if ts.kind.value == "corporation" and not partner.controlled:
            total += usable_rnd_points(partner, state.effective_compute(ts.ppp_partner, turn))
    if ts.ppp_partner is not None and ts.kind.value == "state":
        total = 0  # the state's capacity flows to its PPP corporation
    return max(0, total - ts.rnd_penalty)
