"""Scenario configuration: schema validation, invariants, bundled default."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Union

import jsonschema

from ..errors import SchemaError, ValidationError
from .types import Lane, NodeKind, TeamKind, TechNode, TeamSpec

SCHEMA_VERSION = "1"

DEPLOYMENT_IDS = {"agi", "cais"}


@dataclass
class ShockSpec:
    id: str
    kind: str

    def to_dict(self) -> dict:
        return {"id": self.id, "kind": self.kind}

    @classmethod
    def from_dict(cls, d: dict) -> "ShockSpec":
        return cls(id=d["id"], kind=d["kind"])


SHOCK_KINDS = (
    "startup_breakthrough",
    "open_source_release",
    "public_backlash",
    "warning_shot",
    "market_crash",
    "talent_exodus",
)


@dataclass
class ActionSpec:
    """Catalog entry: an action kind, its parameter schema and costs."""

    kind: str
    params: dict[str, str] = field(default_factory=dict)  # name -> "team" | "node" | "int" | ...
    costs: dict[str, int] = field(default_factory=dict)  # resource -> amount spent
    states_only: bool = False
    requires: dict[str, int] = field(default_factory=dict)  # resource -> minimum to act

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.params:
            d["params"] = dict(self.params)
        if self.costs:
            d["costs"] = dict(self.costs)
        if self.states_only:
            d["states_only"] = True
        if self.requires:
            d["requires"] = dict(self.requires)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ActionSpec":
        return cls(
            kind=d["kind"],
            params=dict(d.get("params", {})),
            costs={k: int(v) for k, v in d.get("costs", {}).items()},
            states_only=bool(d.get("states_only", False)),
            requires={k: int(v) for k, v in d.get("requires", {}).items()},
        )


@dataclass
class Constants:
    start_stability: int = 7
    horizon_turns: int = 8
    start_year: int = 2025
    years_per_turn: int = 2
    election_period: int = 2

    def to_dict(self) -> dict:
        return {
            "start_stability": self.start_stability,
            "horizon_turns": self.horizon_turns,
            "start_year": self.start_year,
            "years_per_turn": self.years_per_turn,
            "election_period": self.election_period,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Constants":
        base = cls()
        return cls(**{k: int(d.get(k, getattr(base, k))) for k in base.to_dict()})


_SCENARIO_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "teams", "tech_tree", "action_catalog", "shock_deck", "constants"],
    "properties": {
        "schema_version": {"type": "string"},
        "name": {"type": "string"},
        "constants": {
            "type": "object",
            "properties": {k: {"type": "integer"} for k in Constants().to_dict()},
        },
        "teams": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "kind", "resources"],
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "kind": {"enum": ["state", "corporation"]},
                    "name": {"type": "string"},
                    "allegiance": {"type": ["string", "null"]},
                    "party": {"enum": ["A", "B", None]},
                    "import_dependent": {"type": "boolean"},
                    "income": {"type": "integer", "minimum": 0},
                    "resources": {
                        "type": "object",
                        "additionalProperties": {"type": "integer"},
                    },
                },
            },
        },
        "tech_tree": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "lane", "level", "kind", "cost"],
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "lane": {"enum": ["LM", "RL"]},
                    "level": {"type": "integer", "minimum": 1, "maximum": 4},
                    "kind": {"enum": ["basic", "application", "safety", "deployment"]},
                    "cost": {"type": "integer"},
                    "prereqs": {"type": "array", "items": {"type": "string"}},
                    "concern": {
                        "type": "object",
                        "required": ["severity"],
                        "properties": {"severity": {"type": "integer"}},
                    },
                    "effects": {"type": "object"},
                },
            },
        },
        "action_catalog": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind"],
                "properties": {
                    "kind": {"type": "string"},
                    "params": {"type": "object", "additionalProperties": {"type": "string"}},
                    "costs": {"type": "object", "additionalProperties": {"type": "integer"}},
                    "requires": {"type": "object", "additionalProperties": {"type": "integer"}},
                    "states_only": {"type": "boolean"},
                },
            },
        },
        "shock_deck": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "kind"],
                "properties": {
                    "id": {"type": "string"},
                    "kind": {"enum": list(SHOCK_KINDS)},
                },
            },
        },
    },
}


@dataclass
class Scenario:
    schema_version: str
    teams: list[TeamSpec]
    tech_tree: list[TechNode]
    action_catalog: list[ActionSpec]
    shock_deck: list[ShockSpec]
    constants: Constants
    name: str = "scenario"

    def __post_init__(self):
        self._nodes = {n.id: n for n in self.tech_tree}
        self._teams = {t.id: t for t in self.teams}
        self._actions = {a.kind: a for a in self.action_catalog}

    def node(self, node_id: str) -> TechNode:
        return self._nodes[node_id]

    def has_node(self, node_id: str) -> bool:
        return node_id in self._nodes

    def team_spec(self, team_id: str) -> TeamSpec:
        return self._teams[team_id]

    def has_team(self, team_id: str) -> bool:
        return team_id in self._teams

    def action(self, kind: str) -> ActionSpec:
        return self._actions[kind]

    def has_action(self, kind: str) -> bool:
        return kind in self._actions

    def basic_node(self, lane: Lane, level: int) -> TechNode:
        for n in self.tech_tree:
            if n.kind == NodeKind.BASIC and n.lane == lane and n.level == level:
                return n
        raise KeyError(f"no basic node for {lane.value} level {level}")

    def safety_nodes(self) -> list[TechNode]:
        return [n for n in self.tech_tree if n.kind == NodeKind.SAFETY]

    def deployment_nodes(self) -> list[TechNode]:
        return [n for n in self.tech_tree if n.kind == NodeKind.DEPLOYMENT]

    def bloc_of(self, team_id: str) -> list[str]:
        """A state plus the corporations sharing its allegiance (or the
        corp's state plus siblings), sorted for determinism."""
        spec = self.team_spec(team_id)
        anchor = spec.id if spec.kind == TeamKind.STATE else spec.allegiance
        members = {t.id for t in self.teams if t.id == anchor or t.allegiance == anchor}
        return sorted(members)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "name": self.name,
            "constants": self.constants.to_dict(),
            "teams": [t.to_dict() for t in self.teams],
            "tech_tree": [n.to_dict() for n in self.tech_tree],
            "action_catalog": [a.to_dict() for a in self.action_catalog],
            "shock_deck": [s.to_dict() for s in self.shock_deck],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        return cls(
            schema_version=d["schema_version"],
            name=d.get("name", "scenario"),
            constants=Constants.from_dict(d.get("constants", {})),
            teams=[TeamSpec.from_dict(t) for t in d["teams"]],
            tech_tree=[TechNode.from_dict(n) for n in d["tech_tree"]],
            action_catalog=[ActionSpec.from_dict(a) for a in d["action_catalog"]],
            shock_deck=[ShockSpec.from_dict(s) for s in d["shock_deck"]],
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Scenario) and self.to_dict() == other.to_dict()


def _check_semantics(sc: Scenario) -> None:
    c = sc.constants
    if not 0 <= c.start_stability <= 10:
        raise ValidationError("constants.start_stability", f"{c.start_stability} outside [0, 10]")
    if c.horizon_turns < 2:
        raise ValidationError("constants.horizon_turns", "must be >= 2")
    if c.election_period < 1:
        raise ValidationError("constants.election_period", "must be >= 1")
    if c.years_per_turn < 1:
        raise ValidationError("constants.years_per_turn", "must be >= 1")

    # roster shape
    ids = [t.id for t in sc.teams]
    if len(set(ids)) != len(ids):
        raise ValidationError("teams", "duplicate team ids")
    states = [t for t in sc.teams if t.kind == TeamKind.STATE]
    corps = [t for t in sc.teams if t.kind == TeamKind.CORPORATION]
    if len(states) != 2:
        raise ValidationError("teams", f"expected exactly 2 states, found {len(states)}")
    if len(corps) < 2:
        raise ValidationError("teams", f"expected at least 2 corporations, found {len(corps)}")
    state_ids = {t.id for t in states}
    for i, t in enumerate(sc.teams):
        path = f"teams[{i}]"
        if t.kind == TeamKind.CORPORATION:
            if t.allegiance not in state_ids:
                raise ValidationError(f"{path}.allegiance", f"corporation {t.id} must be allied to a state")
            if t.party is not None:
                raise ValidationError(f"{path}.party", "only the election-holding state carries a party")
        else:
            if t.allegiance is not None:
                raise ValidationError(f"{path}.allegiance", "states carry no allegiance")
        try:
            t.resources.validate(f"{path}.resources")
        except ValueError as e:
            raise ValidationError(str(e).split(":")[0], str(e)) from None
    election_states = [t for t in states if t.party is not None]
    if len(election_states) > 1:
        raise ValidationError("teams", "at most one state may hold elections (carry a party)")

    # tech tree shape
    node_ids = [n.id for n in sc.tech_tree]
    if len(set(node_ids)) != len(node_ids):
        raise ValidationError("tech_tree", "duplicate node ids")
    known = set(node_ids)
    for i, n in enumerate(sc.tech_tree):
        path = f"tech_tree[{i}]"
        if n.cost <= 0:
            raise ValidationError(f"{path}.cost", "must be positive")
        for p in n.prereqs:
            if p not in known:
                raise ValidationError(f"{path}.prereqs", f"unknown prerequisite {p!r}")
        if n.kind == NodeKind.SAFETY and n.concern_severity is not None:
            raise ValidationError(f"{path}.concern", "safety nodes carry no concern")
        if n.concern_severity is not None and n.concern_severity <= 0:
            raise ValidationError(f"{path}.concern.severity", "must be positive")
        if n.kind == NodeKind.DEPLOYMENT:
            if n.level != 4:
                raise ValidationError(f"{path}.level", "deployment nodes exist only at level 4")
            if n.id not in DEPLOYMENT_IDS:
                raise ValidationError(f"{path}.id", "deployment nodes are exactly 'agi' and 'cais'")
    deployed = {n.id for n in sc.deployment_nodes()}
    if deployed != DEPLOYMENT_IDS:
        raise ValidationError("tech_tree", f"deployment nodes must be exactly {sorted(DEPLOYMENT_IDS)}")

    for lane in Lane:
        for level in range(1, 5):
            basics = [
                n
                for n in sc.tech_tree
                if n.kind == NodeKind.BASIC and n.lane == lane and n.level == level
            ]
            if len(basics) != 1:
                raise ValidationError(
                    "tech_tree", f"lane {lane.value} level {level}: expected exactly 1 basic node, found {len(basics)}"
                )

    for i, n in enumerate(sc.tech_tree):
        if n.kind == NodeKind.APPLICATION:
            own_basic = sc.basic_node(n.lane, n.level)
            if own_basic.id not in n.prereqs:
                raise ValidationError(
                    f"tech_tree[{i}].prereqs",
                    f"application {n.id} must require its own lane/level basic node {own_basic.id}",
                )

    # prerequisite DAG (Kahn's algorithm)
    indeg = {n.id: 0 for n in sc.tech_tree}
    out: dict[str, list[str]] = {n.id: [] for n in sc.tech_tree}
    for n in sc.tech_tree:
        for p in n.prereqs:
            out[p].append(n.id)
            indeg[n.id] += 1
    queue = sorted(nid for nid, d in indeg.items() if d == 0)
    seen = 0
    while queue:
        nid = queue.pop()
        seen += 1
        for nxt in out[nid]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                queue.append(nxt)
    if seen != len(sc.tech_tree):
        cyclic = sorted(nid for nid, d in indeg.items() if d > 0)
        raise ValidationError("tech_tree", f"cycle in prerequisites involving {cyclic}")

    # shocks unique
    shock_ids = [s.id for s in sc.shock_deck]
    if len(set(shock_ids)) != len(shock_ids):
        raise ValidationError("shock_deck", "duplicate shock ids")


def load_scenario(source: Union[dict, str, Path]) -> Scenario:
    """Load and validate a scenario from a dict, JSON string or file path.

    Raises SchemaError for structural problems and ValidationError for
    semantic ones; both name the offending path.
    """
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        text = Path(source).read_text(encoding="utf-8")
        doc = json.loads(text)
    elif isinstance(source, str):
        doc = json.loads(source)
    else:
        doc = source

    validator = jsonschema.Draft202012Validator(_SCENARIO_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        path = "$" + "".join(
            f"[{p}]" if isinstance(p, int) else f".{p}" for p in e.absolute_path
        )
        raise SchemaError(path or "$", e.message)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError("$.schema_version", f"unsupported version {doc.get('schema_version')!r}")

    sc = Scenario.from_dict(doc)
    _check_semantics(sc)
    return sc


def default_scenario() -> Scenario:
    """The bundled four-team, two-lane scenario."""
    text = resources.files("airace.data").joinpath("default_scenario.json").read_text("utf-8")
    return load_scenario(json.loads(text))
