"""Domain types for the AI-race wargame: teams, tech tree, treaties, state.

All types are plain value objects with dict round-tripping so that game
state can be hashed, logged and shipped over the wire deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..rng import GameRng

FACILITATOR = "facilitator"

POWER_MIN, POWER_MAX = 0, 20
STABILITY_MIN, STABILITY_MAX = 0, 10


class TeamKind(str, Enum):
    STATE = "state"
    CORPORATION = "corporation"


class Lane(str, Enum):
    LM = "LM"
    RL = "RL"


class NodeKind(str, Enum):
    BASIC = "basic"
    APPLICATION = "application"
    SAFETY = "safety"
    DEPLOYMENT = "deployment"


class Visibility(str, Enum):
    PUBLIC = "public"
    SECRET = "secret"


class TreatyStatus(str, Enum):
    ACTIVE = "active"
    CONTESTED = "contested"
    DISSOLVED = "dissolved"


class OutcomeKind(str, Enum):
    SAFE_UNIPOLAR = "safe_unipolar"
    SAFE_MULTIPOLAR = "safe_multipolar"
    MISALIGNED_CATASTROPHE = "misaligned_catastrophe"
    COLLAPSE = "collapse"
    TIMEOUT = "timeout"


def clamp(value: int, lo: int, hi: int) -> int:
    return max(lo, min(hi, value))


@dataclass
class ResourcePool:
    """Team resources. Powers clamp to 0..20; capacity units floor at 0."""

    soft: int = 0
    hard: int = 0
    cyber: int = 0
    budget: int = 0
    talent: int = 0
    data: int = 0
    compute: int = 0

    POWERS = ("soft", "hard", "cyber")
    CAPACITIES = ("budget", "talent", "data", "compute")

    def add(self, kind: str, delta: int) -> int:
        """Apply a delta with clamping; returns the new value."""
        cur = getattr(self, kind)
        if kind in self.POWERS:
            new = clamp(cur + delta, POWER_MIN, POWER_MAX)
        else:
            new = max(0, cur + delta)
        setattr(self, kind, new)
        return new

    def validate(self, path: str = "resources") -> None:
        for name in self.POWERS:
            v = getattr(self, name)
            if not POWER_MIN <= v <= POWER_MAX:
                raise ValueError(f"{path}.{name}: {v} outside [0, 20]")
        for name in self.CAPACITIES:
            v = getattr(self, name)
            if v < 0:
                raise ValueError(f"{path}.{name}: {v} negative")

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.POWERS + self.CAPACITIES}

    @classmethod
    def from_dict(cls, d: dict) -> "ResourcePool":
        return cls(**{k: int(d.get(k, 0)) for k in cls.POWERS + cls.CAPACITIES})

    def copy(self) -> "ResourcePool":
        return ResourcePool(**self.to_dict())


@dataclass
class TeamSpec:
    """Static team definition from the scenario."""

    id: str
    kind: TeamKind
    name: str = ""
    allegiance: Optional[str] = None
    party: Optional[str] = None  # "A" or "B"; only on the election-holding state
    import_dependent: bool = False
    income: int = 0
    resources: ResourcePool = field(default_factory=ResourcePool)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "name": self.name,
            "allegiance": self.allegiance,
            "party": self.party,
            "import_dependent": self.import_dependent,
            "income": self.income,
            "resources": self.resources.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TeamSpec":
        return cls(
            id=d["id"],
            kind=TeamKind(d["kind"]),
            name=d.get("name", d["id"]),
            allegiance=d.get("allegiance"),
            party=d.get("party"),
            import_dependent=bool(d.get("import_dependent", False)),
            income=int(d.get("income", 0)),
            resources=ResourcePool.from_dict(d.get("resources", {})),
        )


@dataclass
class TeamState:
    """Mutable per-team state inside a game."""

    id: str
    kind: TeamKind
    allegiance: Optional[str] = None
    party: Optional[str] = None
    import_dependent: bool = False
    income: int = 0
    resources: ResourcePool = field(default_factory=ResourcePool)
    capabilities: list[str] = field(default_factory=list)
    controlled_by: list[str] = field(default_factory=list)
    ppp_partner: Optional[str] = None
    compute_halved_until: int = 0  # turn number through which compute is halved
    rnd_penalty: int = 0  # usable-point malus for the coming turn (regulation)

    @classmethod
    def from_spec(cls, spec: TeamSpec) -> "TeamState":
        return cls(
            id=spec.id,
            kind=spec.kind,
            allegiance=spec.allegiance,
            party=spec.party,
            import_dependent=spec.import_dependent,
            income=spec.income,
            resources=spec.resources.copy(),
        )

    @property
    def controlled(self) -> bool:
        return bool(self.controlled_by)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "allegiance": self.allegiance,
            "party": self.party,
            "import_dependent": self.import_dependent,
            "income": self.income,
            "resources": self.resources.to_dict(),
            "capabilities": sorted(self.capabilities),
            "controlled_by": list(self.controlled_by),
            "ppp_partner": self.ppp_partner,
            "compute_halved_until": self.compute_halved_until,
            "rnd_penalty": self.rnd_penalty,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TeamState":
        return cls(
            id=d["id"],
            kind=TeamKind(d["kind"]),
            allegiance=d.get("allegiance"),
            party=d.get("party"),
            import_dependent=bool(d.get("import_dependent", False)),
            income=int(d.get("income", 0)),
            resources=ResourcePool.from_dict(d.get("resources", {})),
            capabilities=list(d.get("capabilities", [])),
            controlled_by=list(d.get("controlled_by", [])),
            ppp_partner=d.get("ppp_partner"),
            compute_halved_until=int(d.get("compute_halved_until", 0)),
            rnd_penalty=int(d.get("rnd_penalty", 0)),
        )


@dataclass(frozen=True)
class TechNode:
    """One node of the two-lane tech tree."""

    id: str
    lane: Lane
    level: int
    kind: NodeKind
    cost: int
    prereqs: frozenset[str] = frozenset()
    concern_severity: Optional[int] = None
    effects: dict = field(default_factory=dict)  # {"resources": {...}, "flags": [...]}

    def to_dict(self) -> dict:
        d = {
            "id": self.id,
            "lane": self.lane.value,
            "level": self.level,
            "kind": self.kind.value,
            "cost": self.cost,
            "prereqs": sorted(self.prereqs),
        }
        if self.concern_severity is not None:
            d["concern"] = {"severity": self.concern_severity}
        if self.effects:
            d["effects"] = self.effects
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TechNode":
        concern = d.get("concern") or {}
        return cls(
            id=d["id"],
            lane=Lane(d["lane"]),
            level=int(d["level"]),
            kind=NodeKind(d["kind"]),
            cost=int(d["cost"]),
            prereqs=frozenset(d.get("prereqs", [])),
            concern_severity=int(concern["severity"]) if concern else None,
            effects=d.get("effects", {}),
        )


@dataclass
class ProgressEntry:
    points: int = 0
    completed: bool = False
    public: bool = True  # whether completion is common knowledge

    def to_dict(self) -> dict:
        return {"points": self.points, "completed": self.completed, "public": self.public}

    @classmethod
    def from_dict(cls, d: dict) -> "ProgressEntry":
        return cls(points=int(d["points"]), completed=bool(d["completed"]), public=bool(d["public"]))


@dataclass
class Concern:
    """Negative externality spawned by completing an application node."""

    id: str
    source_node: str
    owner: str
    severity: int
    mitigated: bool = False

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "source_node": self.source_node,
            "owner": self.owner,
            "severity": self.severity,
            "mitigated": self.mitigated,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Concern":
        return cls(
            id=d["id"],
            source_node=d["source_node"],
            owner=d["owner"],
            severity=int(d["severity"]),
            mitigated=bool(d["mitigated"]),
        )


# Treaty term kinds
TERM_RND_CAP = "rnd_cap"
TERM_SAFETY_FLOOR = "safety_floor"
TERM_AUTONOMY_GUARANTEE = "autonomy_guarantee"
TERM_DEPLOYMENT_CONSENT = "deployment_consent"

TERM_KINDS = (TERM_RND_CAP, TERM_SAFETY_FLOOR, TERM_AUTONOMY_GUARANTEE, TERM_DEPLOYMENT_CONSENT)


def canonical_terms(terms: list[dict]) -> list[dict]:
    """Sort terms into a canonical order so proposals can be matched."""

    def key(t: dict):
        return (t.get("kind", ""), t.get("lane", ""), t.get("max_level", 0), t.get("min_nodes", 0))

    out = []
    for t in sorted(terms, key=key):
        clean = {"kind": t["kind"]}
        if t["kind"] == TERM_RND_CAP:
            clean["lane"] = t["lane"]
            clean["max_level"] = int(t["max_level"])
        elif t["kind"] == TERM_SAFETY_FLOOR:
            clean["min_nodes"] = int(t["min_nodes"])
        out.append(clean)
    return out


@dataclass
class Treaty:
    id: str
    parties: frozenset[str]
    terms: list[dict]
    verification_rigor: int
    status: TreatyStatus = TreatyStatus.ACTIVE
    contested_at: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "parties": sorted(self.parties),
            "terms": canonical_terms(self.terms),
            "verification_rigor": self.verification_rigor,
            "status": self.status.value,
            "contested_at": self.contested_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Treaty":
        return cls(
            id=d["id"],
            parties=frozenset(d["parties"]),
            terms=list(d["terms"]),
            verification_rigor=int(d["verification_rigor"]),
            status=TreatyStatus(d["status"]),
            contested_at=d.get("contested_at"),
        )


@dataclass
class PolicyAction:
    kind: str
    params: dict = field(default_factory=dict)
    visibility: Visibility = Visibility.PUBLIC

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params), "visibility": self.visibility.value}

    @classmethod
    def from_dict(cls, d: dict) -> "PolicyAction":
        return cls(
            kind=d["kind"],
            params=dict(d.get("params", {})),
            visibility=Visibility(d.get("visibility", "public")),
        )


@dataclass
class DeployDecision:
    project: str  # deployment node id: "agi" or "cais"
    decline_pause: bool = False

    def to_dict(self) -> dict:
        return {"project": self.project, "decline_pause": self.decline_pause}

    @classmethod
    def from_dict(cls, d: dict) -> "DeployDecision":
        return cls(project=d["project"], decline_pause=bool(d.get("decline_pause", False)))


@dataclass
class TurnOrders:
    """One team's sealed commitment for a turn."""

    team: str
    turn: int
    actions: list[PolicyAction] = field(default_factory=list)
    rnd_allocation: dict[str, int] = field(default_factory=dict)
    rnd_secret: bool = False
    treaty_compliance: dict[str, bool] = field(default_factory=dict)  # treaty id -> comply?
    deploy: Optional[DeployDecision] = None
    consent_rtai: list[str] = field(default_factory=list)

    @classmethod
    def empty(cls, team: str, turn: int) -> "TurnOrders":
        return cls(team=team, turn=turn)

    def complies(self, treaty_id: str) -> bool:
        return self.treaty_compliance.get(treaty_id, True)

    def to_dict(self) -> dict:
        return {
            "team": self.team,
            "turn": self.turn,
            "actions": [a.to_dict() for a in self.actions],
            "rnd_allocation": {k: self.rnd_allocation[k] for k in sorted(self.rnd_allocation)},
            "rnd_secret": self.rnd_secret,
            "treaty_compliance": {k: self.treaty_compliance[k] for k in sorted(self.treaty_compliance)},
            "deploy": self.deploy.to_dict() if self.deploy else None,
            "consent_rtai": sorted(self.consent_rtai),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TurnOrders":
        return cls(
            team=d["team"],
            turn=int(d["turn"]),
            actions=[PolicyAction.from_dict(a) for a in d.get("actions", [])],
            rnd_allocation={k: int(v) for k, v in d.get("rnd_allocation", {}).items()},
            rnd_secret=bool(d.get("rnd_secret", False)),
            treaty_compliance={k: bool(v) for k, v in d.get("treaty_compliance", {}).items()},
            deploy=DeployDecision.from_dict(d["deploy"]) if d.get("deploy") else None,
            consent_rtai=list(d.get("consent_rtai", [])),
        )


@dataclass
class IntelEntry:
    """Knowledge one team gained about another via a monitor op."""

    owner: str
    target: str
    node: str
    points: int
    completed: bool
    turn: int

    def to_dict(self) -> dict:
        return {
            "owner": self.owner,
            "target": self.target,
            "node": self.node,
            "points": self.points,
            "completed": self.completed,
            "turn": self.turn,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IntelEntry":
        return cls(
            owner=d["owner"],
            target=d["target"],
            node=d["node"],
            points=int(d["points"]),
            completed=bool(d["completed"]),
            turn=int(d["turn"]),
        )


@dataclass
class DeploymentRecord:
    team: str
    project: str
    turn: int
    roll: int
    threshold: int
    aligned: bool

    def to_dict(self) -> dict:
        return {
            "team": self.team,
            "project": self.project,
            "turn": self.turn,
            "roll": self.roll,
            "threshold": self.threshold,
            "aligned": self.aligned,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DeploymentRecord":
        return cls(
            team=d["team"],
            project=d["project"],
            turn=int(d["turn"]),
            roll=int(d["roll"]),
            threshold=int(d["threshold"]),
            aligned=bool(d["aligned"]),
        )


@dataclass
class GameOutcome:
    kind: OutcomeKind
    teams: list[str] = field(default_factory=list)
    team_scores: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "teams": sorted(self.teams),
            "team_scores": {k: self.team_scores[k] for k in sorted(self.team_scores)},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GameOutcome":
        return cls(
            kind=OutcomeKind(d["kind"]),
            teams=list(d.get("teams", [])),
            team_scores={k: int(v) for k, v in d.get("team_scores", {}).items()},
        )


VIS_PUBLIC = "public"
VIS_TEAM = "team"
VIS_FACILITATOR = "facilitator"


@dataclass
class GameEvent:
    """Append-only, visibility-tagged record of something that happened."""

    seq: int
    turn: int
    kind: str
    visibility: dict  # {"scope": "public"} | {"scope": "team", "teams": [...]} | {"scope": "facilitator"}
    payload: dict = field(default_factory=dict)

    def visible_to(self, viewer: str) -> bool:
        scope = self.visibility.get("scope")
        if viewer == FACILITATOR:
            return True
        if scope == VIS_PUBLIC:
            return True
        if scope == VIS_TEAM:
            return viewer in self.visibility.get("teams", [])
        return False

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "turn": self.turn,
            "kind": self.kind,
            "visibility": self.visibility,
            "payload": self.payload,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GameEvent":
        return cls(
            seq=int(d["seq"]),
            turn=int(d["turn"]),
            kind=d["kind"],
            visibility=dict(d["visibility"]),
            payload=dict(d.get("payload", {})),
        )


def public() -> dict:
    return {"scope": VIS_PUBLIC}


def team_only(*teams: str) -> dict:
    return {"scope": VIS_TEAM, "teams": sorted(set(teams))}


def facilitator_only() -> dict:
    return {"scope": VIS_FACILITATOR}
